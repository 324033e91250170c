// Copyright 2026 The v2vc Authors
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


#ifndef V2VC_HPP
#define V2VC_HPP

#include "v2vc/bench.hpp"
#include "v2vc/exact/branch_and_bound.hpp"
#include "v2vc/exact/brute_force.hpp"
#include "v2vc/generator.hpp"
#include "v2vc/ip_model.hpp"
#include "v2vc/mps.hpp"
#include "v2vc/reduction/reduce.hpp"
#include "v2vc/rv2vc/lowering.hpp"
#include "v2vc/scenario_io.hpp"
#include "v2vc/solution_io.hpp"
#include "v2vc/verifier.hpp"

#endif // V2VC_HPP
