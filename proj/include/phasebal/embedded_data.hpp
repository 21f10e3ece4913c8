// Copyright 2026 The phasebal Authors
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

#include <string_view>

namespace phasebal::data {

// Reference 50-point feeder (kW per house), one row per load point.
inline constexpr std::string_view kReferenceFeederCsv = R"csv(phase1,phase2,phase3
5,4,1
4,2,1
4,3,2
3,1,1
2,3,3
1,2,2
2,1,1
3,3,3
5,1,1
2,2,2
5,5,2
2,4,2
6,2,3
1,1,1
2,4,2
2,2,1
5,3,2
1,4,1
2,2,2
2,2,2
3,1,1
6,2,1
8,3,2
10,2,1
9,1,1
4,3,2
2,4,1
3,3,2
5,2,1
6,1,2
6,2,3
6,3,1
9,2,2
3,2,1
10,2,1
12,3,2
15,4,1
3,1,1
2,2,3
1,1,1
3,2,2
2,4,1
1,3,2
5,2,2
4,1,1
15,1,1
12,2,2
10,5,3
9,2,1
2,3,2
)csv";

inline constexpr std::string_view kDefaultControllerText = R"ctl(# Default load-balancing controller.
# Input: total phase load (kW). Output: suggested load change (kW).
# Every term is a symmetric triangle: term <label> <left> <apex> <right>.

variable Load 0 300
term VLL 0 25 50
term LL 35 60 85
term MLL 65 90 115
term PL 100 125 150
term SOL 125 150 175
term MOL 165 190 215
term OL 200 225 250
term HOL 235 267.5 300

variable Change -150 150
term HS -150 -117.5 -85
term S -100 -75 -50
term MS -65 -40 -15
term SS -50 -12.5 25
term PA 0 25 50
term MA 35 60 85
term LA 65 90 115
term VLA 100 125 150

rule VLL -> VLA
rule LL -> LA
rule MLL -> MA
rule PL -> PA
rule SOL -> SS
rule MOL -> MS
rule OL -> S
rule HOL -> HS

resolution 10001
)ctl";

}  // namespace phasebal::data
