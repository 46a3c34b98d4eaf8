// Copyright 2026 The bethe-lab Authors
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

#ifndef BETHE_BETHE_HPP
#define BETHE_BETHE_HPP

#include "bethe/bethe_solver.hpp"
#include "bethe/combinatorics.hpp"
#include "bethe/correlators.hpp"
#include "bethe/ed_oracle.hpp"
#include "bethe/emulator.hpp"
#include "bethe/errors.hpp"
#include "bethe/gaudin.hpp"
#include "bethe/io.hpp"
#include "bethe/rng.hpp"
#include "bethe/state_factory.hpp"

#endif  // BETHE_BETHE_HPP
