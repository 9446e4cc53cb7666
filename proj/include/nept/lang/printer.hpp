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

#ifndef NEPT_LANG_PRINTER_HPP_
#define NEPT_LANG_PRINTER_HPP_

#include <string>

#include "nept/lang/ast.hpp"

namespace nept::lang {

/// Canonical source form: two-space indentation, one statement per line,
/// symbol connectives (`&`, `|`), minimal parentheses. Parsing the result
/// yields a structurally equal Program. The empty program prints as "".
std::string pretty_print(const Program& p);

}  // namespace nept::lang

#endif  // NEPT_LANG_PRINTER_HPP_
