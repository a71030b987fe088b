// Copyright 2026 The upscore Authors
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

#include <cstddef>
#include <functional>

namespace upscore {

// Worker count used by parallel loops. Reads the UPSCORE_THREADS environment
// variable once per process; falls back to the hardware concurrency.
// Result is clamped to [1, 256].
int worker_threads();

// Runs fn(i) for i in [0, n) on worker_threads() threads with a static block
// partition. Each index is processed exactly once, so loops whose bodies only
// write to slot i produce identical results for any thread count. The first
// exception thrown by a body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace upscore
