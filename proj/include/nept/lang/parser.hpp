/* Copyright 2026 The Nept Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef NEPT_LANG_PARSER_HPP_
#define NEPT_LANG_PARSER_HPP_

#include <string>
#include <vector>

#include "nept/lang/ast.hpp"
#include "nept/lang/token.hpp"

namespace nept::lang {

/// Recursive-descent parse of a token stream (which must end with Eof).
/// Binding strength, loosest first: or/`|`, and/`&`, not, comparison
/// (non-associative, chaining rejected), +/-, *//, unary minus, postfix.
/// Throws ParseError with an expected-token diagnostic on malformed input.
Program parse(const std::vector<Token>& tokens);

/// Tokenizes and parses in one step.
Program parse(const std::string& source);

}  // namespace nept::lang

#endif  // NEPT_LANG_PARSER_HPP_
