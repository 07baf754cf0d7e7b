// Copyright 2026 The PIPG Authors
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
#include "pipg/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipg/errors.hpp"

namespace pipg {
namespace {

using json = nlohmann::json;

json encode_number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) throw ContractViolation("cannot serialize NaN");
  return x > 0 ? "inf" : "-inf";
}

double decode_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ContractViolation("expected a number, got " + j.dump());
}

json encode_vector(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(encode_number(v(i)));
  return arr;
}

Vector decode_vector(const json& j) {
  if (!j.is_array()) throw ContractViolation("expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = decode_number(j[i]);
  }
  return v;
}

json encode_dense(const DenseMatrix& m) {
  json rows_json = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    rows_json.push_back(encode_vector(m.row(i).transpose()));
  }
  return rows_json;
}

DenseMatrix decode_dense(const json& j, Index expected_cols) {
  if (!j.is_array()) throw ContractViolation("dense matrix must be a row list");
  DenseMatrix m(static_cast<Index>(j.size()), expected_cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = decode_vector(j[i]);
    if (row.size() != expected_cols) {
      throw ContractViolation("dense matrix row has wrong length");
    }
    m.row(static_cast<Index>(i)) = row.transpose();
  }
  return m;
}

json encode_set(const SetDescriptor& set) {
  json params = json::object();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          params["lower"] = encode_vector(s.lower);
          params["upper"] = encode_vector(s.upper);
        } else if constexpr (std::is_same_v<T, Ball>) {
          params["radius"] = s.radius;
          params["center"] = encode_vector(s.center);
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          params["normal"] = encode_vector(s.normal);
          params["offset"] = s.offset;
        } else if constexpr (std::is_same_v<T, SecondOrderCone>) {
          params["ratio"] = s.ratio;
          params["dim"] = s.dim;
        } else if constexpr (std::is_same_v<T, BallCapCone>) {
          params["radius"] = s.radius;
          params["ratio"] = s.ratio;
          params["dim"] = s.dim;
        } else {
          params["dim"] = s.dim;
        }
      },
      set);
  return params;
}

SetDescriptor decode_set(const std::string& type, const json& params) {
  if (type == "box") {
    return Box{decode_vector(params.at("lower")), decode_vector(params.at("upper"))};
  }
  if (type == "ball") {
    return Ball{params.at("radius").get<double>(), decode_vector(params.at("center"))};
  }
  if (type == "halfspace") {
    return HalfSpace{decode_vector(params.at("normal")),
                     params.at("offset").get<double>()};
  }
  if (type == "soc") {
    return SecondOrderCone{params.at("ratio").get<double>(),
                           params.at("dim").get<Index>()};
  }
  if (type == "ball_cap_cone") {
    return BallCapCone{params.at("radius").get<double>(),
                       params.at("ratio").get<double>(),
                       params.at("dim").get<Index>()};
  }
  if (type == "full") return FullSpace{params.at("dim").get<Index>()};
  throw ContractViolation("unknown set type '" + type + "'");
}

}  // namespace

std::string problem_to_json(const CanonicalProblem& prob, int indent) {
  json j;
  j["n"] = prob.n();
  j["m"] = prob.m();
  if (prob.p.is_diagonal()) {
    j["P"] = {{"diag", encode_vector(prob.p.diag())}};
  } else {
    j["P"] = {{"dense", encode_dense(prob.p.dense_matrix())}};
  }
  j["q"] = encode_vector(prob.q);
  if (const auto* hs = std::get_if<SparseMatrixCSC>(&prob.h)) {
    SparseMatrixCSC h = *hs;
    h.makeCompressed();
    std::vector<std::int64_t> colptr(h.outerIndexPtr(),
                                     h.outerIndexPtr() + h.cols() + 1);
    std::vector<std::int64_t> rowval(h.innerIndexPtr(),
                                     h.innerIndexPtr() + h.nonZeros());
    std::vector<double> nzval(h.valuePtr(), h.valuePtr() + h.nonZeros());
    j["H"] = {{"csc", {{"colptr", colptr}, {"rowval", rowval}, {"nzval", nzval}}}};
  } else {
    j["H"] = {{"dense", encode_dense(std::get<DenseMatrix>(prob.h))}};
  }
  j["g"] = encode_vector(prob.g);
  json sets = json::array();
  for (const auto& b : prob.d.blocks()) {
    sets.push_back({{"type", set_type_name(b.set)},
                    {"params", encode_set(b.set)},
                    {"range", {b.offset, b.offset + b.size}}});
  }
  j["D"] = sets;
  return j.dump(indent);
}

CanonicalProblem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ContractViolation(std::string("problem JSON: ") + e.what());
  }
  try {
    CanonicalProblem prob;
    const Index n = j.at("n").get<Index>();
    const Index m = j.at("m").get<Index>();

    const json& p = j.at("P");
    if (p.contains("diag")) {
      prob.p = CostHessian::diagonal(decode_vector(p.at("diag")));
    } else {
      prob.p = CostHessian::dense(decode_dense(p.at("dense"), n));
    }
    prob.q = decode_vector(j.at("q"));
    prob.g = decode_vector(j.at("g"));

    const json& h = j.at("H");
    if (h.contains("csc")) {
      const json& c = h.at("csc");
      const auto colptr = c.at("colptr").get<std::vector<std::int64_t>>();
      const auto rowval = c.at("rowval").get<std::vector<std::int64_t>>();
      const auto nzval = c.at("nzval").get<std::vector<double>>();
      if (static_cast<Index>(colptr.size()) != n + 1 ||
          rowval.size() != nzval.size()) {
        throw ContractViolation("problem JSON: malformed CSC arrays");
      }
      std::vector<Eigen::Triplet<double>> triplets;
      triplets.reserve(nzval.size());
      for (Index col = 0; col < n; ++col) {
        for (auto k = colptr[col]; k < colptr[col + 1]; ++k) {
          if (k < 0 || k >= static_cast<std::int64_t>(rowval.size()) ||
              rowval[k] < 0 || rowval[k] >= m) {
            throw ContractViolation("problem JSON: CSC index out of range");
          }
          triplets.emplace_back(static_cast<Index>(rowval[k]), col, nzval[k]);
        }
      }
      SparseMatrixCSC hs(m, n);
      hs.setFromTriplets(triplets.begin(), triplets.end());
      canonicalize(hs);
      prob.h = std::move(hs);
    } else {
      DenseMatrix hd = decode_dense(h.at("dense"), n);
      if (hd.rows() != m) throw ContractViolation("problem JSON: H row count");
      prob.h = std::move(hd);
    }

    std::vector<ProductSet::Block> blocks;
    for (const auto& s : j.at("D")) {
      const auto range = s.at("range").get<std::vector<Index>>();
      if (range.size() != 2) throw ContractViolation("problem JSON: bad range");
      blocks.push_back({decode_set(s.at("type").get<std::string>(), s.at("params")),
                        range[0], range[1] - range[0]});
    }
    prob.d = ProductSet::from_blocks(std::move(blocks));
    if (prob.n() != n || prob.m() != m) {
      throw ContractViolation("problem JSON: n/m disagree with q/g lengths");
    }
    validate(prob, /*check_rank=*/false);
    return prob;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("problem JSON: ") + e.what());
  }
}

void write_problem(const std::filesystem::path& path,
                   const CanonicalProblem& prob) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << problem_to_json(prob) << '\n';
}

CanonicalProblem read_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return problem_from_json(buffer.str());
}

}  // namespace pipg
