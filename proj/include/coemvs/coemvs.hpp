// SPDX-License-Identifier: Apache-2.0
//
// coarray-emvs — difference-coarray tensor estimation for bistatic EMVS-MIMO radar
// Copyright (C) 2026 coarray-emvs developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef COEMVS_COEMVS_HPP
#define COEMVS_COEMVS_HPP

#include "common.hpp"
#include "config.hpp"
#include "cp.hpp"
#include "crb.hpp"
#include "emvs.hpp"
#include "estimator.hpp"
#include "geometry.hpp"
#include "harness.hpp"
#include "hungarian.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "tensor.hpp"

#endif // COEMVS_COEMVS_HPP
