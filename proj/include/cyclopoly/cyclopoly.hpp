/*
 Copyright 2026 The cyclopoly Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include "cyclopoly/errors.hpp"
#include "cyclopoly/rng.hpp"
#include "cyclopoly/linalg.hpp"
#include "cyclopoly/state_space.hpp"
#include "cyclopoly/cyclic.hpp"
#include "cyclopoly/subspace.hpp"
#include "cyclopoly/structure.hpp"
#include "cyclopoly/polytope.hpp"
#include "cyclopoly/metrics.hpp"
#include "cyclopoly/pso.hpp"
#include "cyclopoly/io.hpp"
#include "cyclopoly/experiment.hpp"
#include "cyclopoly/report.hpp"
