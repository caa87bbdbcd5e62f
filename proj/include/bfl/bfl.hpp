// Copyright 2026 The bfl Authors.
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

#include "bfl/correlation_kernels.hpp"
#include "bfl/errors.hpp"
#include "bfl/field_simulator.hpp"
#include "bfl/fredholm.hpp"
#include "bfl/gibbs_ensemble.hpp"
#include "bfl/parallel.hpp"
#include "bfl/quadrature.hpp"
#include "bfl/rng.hpp"
#include "bfl/special_functions.hpp"
#include "bfl/transition_kernels.hpp"
#include "bfl/types.hpp"
#include "bfl/verification.hpp"
#include "bfl/version.hpp"
