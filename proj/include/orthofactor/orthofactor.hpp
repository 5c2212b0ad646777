/*
 * Copyright 2026 The orthofactor Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ORTHOFACTOR_ORTHOFACTOR_HPP_
#define ORTHOFACTOR_ORTHOFACTOR_HPP_

#include "orthofactor/error.hpp"
#include "orthofactor/factor.hpp"
#include "orthofactor/generators.hpp"
#include "orthofactor/io.hpp"
#include "orthofactor/matrix.hpp"
#include "orthofactor/quadspace.hpp"
#include "orthofactor/relgroup.hpp"
#include "orthofactor/ring.hpp"

#endif  // ORTHOFACTOR_ORTHOFACTOR_HPP_
