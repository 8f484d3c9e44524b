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

#include <string>
#include <vector>

#include "dsh/core.hpp"

namespace dsh {

/// Independent concatenation. Tokens are the component tuple folded with
/// combine_tokens starting from kTupleSeed; the CPF is the product.
FamilyPtr concat(std::vector<FamilyPtr> families);

/// concat of k independent copies.
FamilyPtr power(FamilyPtr family, unsigned k);

/// Picks component i with probability probs[i] at sampling time. The
/// component index is folded into both tokens, so pairs drawn from
/// different components can never collide.
FamilyPtr mixture(std::vector<FamilyPtr> families, std::vector<double> probs);

/// Same family under a different display name.
FamilyPtr renamed(FamilyPtr family, std::string name);

/// Weakest kind among components (closed_form < bounded < empirical).
CpfKind weakest_kind(const std::vector<FamilyPtr>& families);

}  // namespace dsh
