// Copyright 2026 The cliqueloc Authors
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

namespace cliqueloc {

/// Number of worker threads used by the parallel stages. The default comes
/// from the CLIQUELOC_NUM_THREADS environment variable, falling back to the
/// hardware concurrency.
int num_threads();

/// Overrides the worker count for the whole process; `n <= 0` restores the default.
void set_num_threads(int n);

/// Runs `body(i)` for every i in [0, n). Bodies must only write to
/// per-index storage so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cliqueloc
