// Copyright 2026 The Bento Authors
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

#include <algorithm>
#include <cmath>

namespace bento::compute {

template <typename RunFn>
std::uint64_t calibrate_iterations(RunFn&& run, std::int64_t target_ns) {
  constexpr std::int64_t kPilotNs = 1'000'000;
  std::uint64_t iterations = 1024;
  std::int64_t elapsed = 0;
  for (;;) {
    elapsed = run(iterations);
    if (elapsed >= kPilotNs || iterations >= (1ULL << 40)) break;
    iterations *= 2;
  }
  if (elapsed >= target_ns) return iterations;
  const double scale = static_cast<double>(target_ns) / static_cast<double>(std::max<std::int64_t>(elapsed, 1));
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(iterations) * scale * 1.1));
}

}  // namespace bento::compute
