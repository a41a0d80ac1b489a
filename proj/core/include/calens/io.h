/*
 * Copyright 2026 The Calens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CALENS_IO_H_
#define CALENS_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace calens {

// Throws kIoError.
std::string read_file(const std::filesystem::path& path);

// Lines without their terminators; a trailing '\r' is stripped.
std::vector<std::string> split_lines(std::string_view text);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// 16 hex digits of FNV-1a over the bytes.
std::string hex_digest(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

bool is_blank(std::string_view line);

}  // namespace calens

#endif  // CALENS_IO_H_
