// Copyright 2026 The aklt-mqc Authors
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

#ifndef AKLT_TENSOR_NETWORK_H
#define AKLT_TENSOR_NETWORK_H

#include <vector>

#include "aklt/common.h"

namespace aklt {

/// Dense tensor with integer leg labels, stored row-major (first label slowest).
struct LabeledTensor {
    std::vector<int> labels;
    std::vector<size_t> dims;
    std::vector<cplx> data;

    static LabeledTensor scalar(cplx v);
    size_t size() const {
        return data.size();
    }
    size_t dim_of(int label) const;
    bool has(int label) const;
};

/// Reorders legs to `order` (a permutation of the current labels).
LabeledTensor permute(const LabeledTensor &t, const std::vector<int> &order);

/// Sums over all labels shared by `a` and `b`. Result legs: free legs of a, then free legs of b.
/// Throws SizeError if the result would exceed `max_size` entries.
LabeledTensor contract(const LabeledTensor &a, const LabeledTensor &b, size_t max_size = SIZE_MAX);

}  // namespace aklt

#endif
