// Copyright 2026 The DSH Toolkit Authors
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

#include <cstddef>
#include <string_view>

#include "dsh/core.hpp"

namespace dsh {

// Family expressions, prefix notation with named parameters:
//
//   expr   := name | name '(' [arg {',' arg}] ')'
//   arg    := key '=' value | expr | number
//   value  := number | word | '[' number {',' number} ']'
//
// Hamming:   bit  anti  sbit(alpha=)  santi(alpha=,beta=)  danti(alpha=)
//            const(p=)  product(k1=,k2=)  poly(coef=[a0,a1,...])
//            step(r=,c=,k=)
// Sphere:    simhash  cp(sign=plus|minus)  filter(t=,m=,sign=)
//            annulus(alpha_max=,t=,s=)  valiant(coef=[...])
// Euclidean: e2dsh(w=,k=)
// Combinators: concat(e,e,...)  pow(e,k)  mix(e,e,...,p=[...])
//
// Whitespace is ignored. Every leaf is built in dimension d.
FamilyPtr parse_family(std::string_view text, std::size_t d);

/// Help text listing the grammar above.
const char* family_grammar();

}  // namespace dsh
