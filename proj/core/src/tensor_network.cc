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

#include "aklt/tensor_network.h"

#include <algorithm>

namespace aklt {

LabeledTensor LabeledTensor::scalar(cplx v) {
    LabeledTensor t;
    t.data = {v};
    return t;
}

size_t LabeledTensor::dim_of(int label) const {
    for (size_t k = 0; k < labels.size(); k++) {
        if (labels[k] == label) {
            return dims[k];
        }
    }
    throw InvalidInput("label not present");
}

bool LabeledTensor::has(int label) const {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

LabeledTensor permute(const LabeledTensor &t, const std::vector<int> &order) {
    const size_t n = t.labels.size();
    if (order.size() != n) {
        throw InvalidInput("permute: wrong number of labels");
    }
    if (order == t.labels) {
        return t;
    }
    std::vector<size_t> old_stride(n);
    size_t s = 1;
    for (size_t k = n; k-- > 0;) {
        old_stride[k] = s;
        s *= t.dims[k];
    }
    LabeledTensor out;
    out.labels = order;
    out.dims.resize(n);
    std::vector<size_t> src_stride(n);
    for (size_t k = 0; k < n; k++) {
        auto it = std::find(t.labels.begin(), t.labels.end(), order[k]);
        if (it == t.labels.end()) {
            throw InvalidInput("permute: unknown label");
        }
        size_t j = (size_t)(it - t.labels.begin());
        out.dims[k] = t.dims[j];
        src_stride[k] = old_stride[j];
    }
    out.data.resize(t.data.size());
    if (n == 0) {
        out.data = t.data;
        return out;
    }
    // Odometer over the output index, innermost leg handled in a tight loop.
    std::vector<size_t> idx(n, 0);
    const size_t inner_dim = out.dims[n - 1];
    const size_t inner_stride = src_stride[n - 1];
    size_t src = 0;
    for (size_t dst = 0; dst < out.data.size(); dst += inner_dim) {
        for (size_t i = 0; i < inner_dim; i++) {
            out.data[dst + i] = t.data[src + i * inner_stride];
        }
        for (size_t k = n - 1; k-- > 0;) {
            idx[k]++;
            src += src_stride[k];
            if (idx[k] < out.dims[k]) {
                break;
            }
            src -= src_stride[k] * idx[k];
            idx[k] = 0;
        }
    }
    return out;
}

LabeledTensor contract(const LabeledTensor &a, const LabeledTensor &b, size_t max_size) {
    std::vector<int> shared, free_a, free_b;
    for (int l : a.labels) {
        (b.has(l) ? shared : free_a).push_back(l);
    }
    for (int l : b.labels) {
        if (!a.has(l)) {
            free_b.push_back(l);
        }
    }
    size_t m = 1, k = 1, n = 1;
    LabeledTensor out;
    for (int l : free_a) {
        m *= a.dim_of(l);
        out.labels.push_back(l);
        out.dims.push_back(a.dim_of(l));
    }
    for (int l : shared) {
        if (a.dim_of(l) != b.dim_of(l)) {
            throw InvalidInput("contract: dimension mismatch on shared label");
        }
        k *= a.dim_of(l);
    }
    for (int l : free_b) {
        n *= b.dim_of(l);
        out.labels.push_back(l);
        out.dims.push_back(b.dim_of(l));
    }
    if (m * n > max_size) {
        throw SizeError("tensor contraction exceeds the configured amplitude cap");
    }
    std::vector<int> oa = free_a;
    oa.insert(oa.end(), shared.begin(), shared.end());
    std::vector<int> ob = shared;
    ob.insert(ob.end(), free_b.begin(), free_b.end());
    LabeledTensor pa = permute(a, oa);
    LabeledTensor pb = permute(b, ob);
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> ma(pa.data.data(), (Eigen::Index)m, (Eigen::Index)k);
    Eigen::Map<const RowMat> mb(pb.data.data(), (Eigen::Index)k, (Eigen::Index)n);
    out.data.resize(m * n);
    Eigen::Map<RowMat> mo(out.data.data(), (Eigen::Index)m, (Eigen::Index)n);
    mo.noalias() = ma * mb;
    return out;
}

}  // namespace aklt
