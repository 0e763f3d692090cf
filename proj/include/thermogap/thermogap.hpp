// Copyright 2026 The thermogap Authors
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

#include "thermogap/channels.hpp"
#include "thermogap/demo.hpp"
#include "thermogap/error.hpp"
#include "thermogap/feasibility.hpp"
#include "thermogap/io.hpp"
#include "thermogap/linalg.hpp"
#include "thermogap/majorization.hpp"
#include "thermogap/monotones.hpp"
#include "thermogap/random.hpp"
#include "thermogap/thermo.hpp"
