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

#include "bento/task.hpp"

// Descriptors of the built-in tasks.
namespace bento::tasks {

TaskDescriptor compute_descriptor();   // "compute"
TaskDescriptor memory_descriptor();    // "memory"
TaskDescriptor storage_descriptor();   // "storage"
TaskDescriptor network_descriptor();   // "net_tcp"
TaskDescriptor pushdown_descriptor();  // "pred_pushdown"
TaskDescriptor index_descriptor();     // "index_offload"

}  // namespace bento::tasks
