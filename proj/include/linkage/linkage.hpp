// Copyright 2026 The Linkage Authors
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

#include "linkage/core.hpp"
#include "linkage/errors.hpp"
#include "linkage/experiment.hpp"
#include "linkage/graph.hpp"
#include "linkage/hamming.hpp"
#include "linkage/hardness.hpp"
#include "linkage/io.hpp"
#include "linkage/mpc.hpp"
#include "linkage/oracle.hpp"
#include "linkage/partition.hpp"
#include "linkage/slc.hpp"
#include "linkage/unit_step.hpp"
