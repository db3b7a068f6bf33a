// Copyright 2026 The nlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "nlsim/error.hpp"
#include "nlsim/matcore.hpp"
#include "nlsim/bipartite.hpp"
#include "nlsim/norms.hpp"
#include "nlsim/reduction.hpp"
#include "nlsim/shared_coins.hpp"
#include "nlsim/estimator.hpp"
#include "nlsim/quantum_protocol.hpp"
#include "nlsim/oracle.hpp"
#include "nlsim/harness.hpp"
#include "nlsim/games.hpp"
#include "nlsim/json_io.hpp"
#include "nlsim/run_record.hpp"
