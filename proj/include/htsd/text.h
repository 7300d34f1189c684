// Copyright 2026 The htsd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HTSD_TEXT_H_
#define HTSD_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace htsd {

// Splits on '\n', dropping a trailing '\r' from each line. A final newline
// does not produce an empty last line.
std::vector<std::string_view> SplitLines(std::string_view text);
std::vector<std::string_view> SplitWhitespace(std::string_view text);
std::vector<std::string_view> Split(std::string_view text, char sep);
std::string_view Trim(std::string_view s);

// Whole-token numeric parsing. `where` prefixes the InputError message.
double ParseDouble(std::string_view s, std::string_view where);
int64_t ParseInt(std::string_view s, std::string_view where);
bool ParseBool(std::string_view s, std::string_view where);

}  // namespace htsd

#endif  // HTSD_TEXT_H_
