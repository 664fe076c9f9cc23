/* Copyright 2026 The Rangekit Authors. All Rights Reserved.

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

#ifndef RANGEKIT_WORKERS_H_
#define RANGEKIT_WORKERS_H_

namespace rangekit {

// Resolves a worker count for the parallel kernels: positive requests win,
// then the RANGEKIT_WORKERS environment variable, then the OpenMP hardware
// default. Always >= 1. Results never affect output bytes, only speed.
int resolve_workers(int requested);

}  // namespace rangekit

#endif  // RANGEKIT_WORKERS_H_
