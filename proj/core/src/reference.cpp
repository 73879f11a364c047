// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/reference.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <type_traits>

#include "hetccl/error.hpp"

namespace hetccl::reference {

namespace {

template <typename T>
std::vector<T> as_values(const Payload& p) {
  std::vector<T> v(p.size() / sizeof(T));
  std::memcpy(v.data(), p.data(), v.size() * sizeof(T));
  return v;
}

template <typename T>
Payload as_bytes(const std::vector<T>& v) {
  Payload p(v.size() * sizeof(T));
  std::memcpy(p.data(), v.data(), p.size());
  return p;
}

template <typename T>
T combine(ReduceOp op, T a, T b) {
  switch (op) {
    case ReduceOp::kSum:
      if constexpr (std::is_same_v<T, std::int32_t>) {
        return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) +
                                         static_cast<std::uint32_t>(b));
      } else {
        return a + b;
      }
    case ReduceOp::kMin: return std::min(a, b);
    case ReduceOp::kMax: return std::max(a, b);
  }
  return a;
}

template <typename T>
std::vector<Payload> evaluate_typed(const CollectiveSpec& spec,
                                    const std::vector<Payload>& inputs) {
  const std::size_t n = inputs.size();
  std::vector<std::vector<T>> in;
  for (const Payload& p : inputs) in.push_back(as_values<T>(p));
  const std::size_t count = in[0].size();

  std::vector<T> total;
  if (is_reducing(spec.op)) {
    total = in[0];
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t i = 0; i < count; ++i) total[i] = combine(*spec.combiner, total[i], in[r][i]);
    }
  }

  std::vector<Payload> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<T> v;
    switch (spec.op) {
      case CollectiveOp::kAllReduce:
        v = total;
        break;
      case CollectiveOp::kReduceScatter: {
        const std::size_t shard = count / n;
        v.assign(total.begin() + static_cast<std::ptrdiff_t>(r * shard),
                 total.begin() + static_cast<std::ptrdiff_t>((r + 1) * shard));
        break;
      }
      case CollectiveOp::kReduce:
        v = r == static_cast<std::size_t>(*spec.root) ? total : in[r];
        break;
      case CollectiveOp::kAllGather:
        for (std::size_t j = 0; j < n; ++j) v.insert(v.end(), in[j].begin(), in[j].end());
        break;
      case CollectiveOp::kBroadcast:
        v = in[static_cast<std::size_t>(*spec.root)];
        break;
      case CollectiveOp::kAllToAll: {
        const std::size_t block = count / n;
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t i = 0; i < block; ++i) v.push_back(in[j][r * block + i]);
        }
        break;
      }
    }
    out[r] = as_bytes(v);
  }
  return out;
}

}  // namespace

std::vector<Payload> evaluate(const CollectiveSpec& spec,
                              const std::vector<Payload>& inputs) {
  if (inputs.empty()) throw Error(Errc::kInvalidArgument, "no inputs");
  spec.validate(static_cast<int>(inputs.size()));
  switch (spec.dtype) {
    case DataType::kF32: return evaluate_typed<float>(spec, inputs);
    case DataType::kF64: return evaluate_typed<double>(spec, inputs);
    case DataType::kI32: return evaluate_typed<std::int32_t>(spec, inputs);
  }
  return {};
}

}  // namespace hetccl::reference
