// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Umbrella header: the whole library.

#include "driftgen/common.hpp"
#include "driftgen/datagen.hpp"
#include "driftgen/driftops.hpp"
#include "driftgen/ingest.hpp"
#include "driftgen/metrics.hpp"
#include "driftgen/profile.hpp"
#include "driftgen/serialize.hpp"
#include "driftgen/similarity.hpp"
#include "driftgen/table.hpp"
#include "driftgen/templates.hpp"
#include "driftgen/timegen.hpp"
#include "driftgen/workloads.hpp"
