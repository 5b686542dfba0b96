// Copyright 2026 The netaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "netaug/trace.hpp"

namespace netaug::io {

// .dtrace: one trace per line, `label<TAB>c0 c1 c2 ...` with cells in
// {-1, 0, 1}. Label -1 is unmonitored; `-` marks an unlabeled trace.
//
// .ttrace: one JSON record per line,
//   {"label": 3, "cells": [[timestamp, direction, size], ...]}
// with "label": null for unlabeled traces. Timestamps are written in
// shortest round-trip decimal form.

void write_dtrace(std::ostream& out, std::span<const DirectionTrace> traces);
/// Lines are normalized to `length` cells when given; otherwise kept as is.
/// Blank lines are skipped. Throws ParseError with the 1-based line number.
std::vector<DirectionTrace> read_dtrace(
    std::istream& in, std::optional<std::size_t> length = std::nullopt);

void write_ttrace(std::ostream& out, std::span<const TimedTrace> traces);
std::vector<TimedTrace> read_ttrace(std::istream& in);

void save_dtrace(const std::filesystem::path& path,
                 std::span<const DirectionTrace> traces);
std::vector<DirectionTrace> load_dtrace(
    const std::filesystem::path& path,
    std::optional<std::size_t> length = std::nullopt);

void save_ttrace(const std::filesystem::path& path,
                 std::span<const TimedTrace> traces);
std::vector<TimedTrace> load_ttrace(const std::filesystem::path& path);

}  // namespace netaug::io
