/* Copyright 2026 The ReluQC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
//
// Sparse SDPA (.dat-s) interchange for the compiled problem
//
//   minimize c.x   s.t.   X = sum_k x_k F_k - F_0  PSD (block diagonal).
//
// Grammar emitted here (and accepted by import_sdpa):
//   - comment lines start with '*' or '"' and only precede the header
//   - line 1: m              (number of variables)
//   - line 2: nblocks
//   - line 3: block sizes, diagonal blocks negated
//   - line 4: m objective coefficients
//   - body:   matno blkno i j value     (1-based, upper triangle, i <= j;
//             matno 0 is F_0), sorted by (matno, blkno, i, j)
// Values are printed with %.17g so export/import round-trips bit-exactly.

#include <cctype>
#include <cstdio>
#include <sstream>

#include "sdp_flat.hpp"

namespace reluqc::sdp {

namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string export_sdpa(const SdpProblem& p) {
  FlatSdp flat = compile(p);
  require(!flat.precompiled_status ||
              *flat.precompiled_status == SolveStatus::kOptimal,
          "export_sdpa: problem is decided at compile time (" +
              flat.diagnostic + "); nothing to export");

  std::ostringstream out;
  out << "* reluqc sparse SDPA export\n";
  out << flat.num_vars << "\n";
  const size_t nblocks = flat.dense.size() + flat.diag.size();
  out << nblocks << "\n";
  for (size_t b = 0; b < flat.dense.size(); ++b) {
    out << (b ? " " : "") << flat.dense[b].size;
  }
  for (size_t b = 0; b < flat.diag.size(); ++b) {
    out << (flat.dense.empty() && b == 0 ? "" : " ") << -flat.diag[b].size;
  }
  out << "\n";
  for (int k = 0; k < flat.num_vars; ++k) {
    out << (k ? " " : "") << format_value(flat.c[k]);
  }
  out << "\n";

  // matno 0 holds F0 = -C; matno k holds the coefficient of x_k.
  auto emit_dense = [&](int matno, int blkno, const Matrix& mat) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = i; j < mat.cols(); ++j) {
        if (mat(i, j) != 0.0) {
          out << matno << " " << blkno << " " << (i + 1) << " " << (j + 1)
              << " " << format_value(mat(i, j)) << "\n";
        }
      }
    }
  };
  auto emit_diag = [&](int matno, int blkno, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v[i] != 0.0) {
        out << matno << " " << blkno << " " << (i + 1) << " " << (i + 1) << " "
            << format_value(v[i]) << "\n";
      }
    }
  };

  for (int matno = 0; matno <= flat.num_vars; ++matno) {
    int blkno = 1;
    for (const auto& blk : flat.dense) {
      if (matno == 0) {
        emit_dense(0, blkno, -blk.C);
      } else {
        for (const auto& [k, G] : blk.terms) {
          if (k == matno - 1) emit_dense(matno, blkno, G);
        }
      }
      ++blkno;
    }
    for (const auto& blk : flat.diag) {
      if (matno == 0) {
        emit_diag(0, blkno, -blk.C);
      } else {
        for (const auto& [k, v] : blk.terms) {
          if (k == matno - 1) emit_diag(matno, blkno, v);
        }
      }
      ++blkno;
    }
  }
  return out.str();
}

SdpProblem import_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> content;
  while (std::getline(in, line)) {
    // Strip comments and blank lines.
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '*' || line[first] == '"') continue;
    content.push_back(line);
  }
  require(content.size() >= 4, "import_sdpa: truncated header");

  auto parse_ints = [](const std::string& s) {
    std::istringstream ss(s);
    std::vector<long> out;
    long v;
    while (ss >> v) out.push_back(v);
    return out;
  };
  auto parse_doubles = [](const std::string& s) {
    // SDPA allows {, } and , as separators in the objective line.
    std::string cleaned = s;
    for (char& c : cleaned) {
      if (c == '{' || c == '}' || c == ',' || c == '(' || c == ')') c = ' ';
    }
    std::istringstream ss(cleaned);
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    return out;
  };

  const auto mline = parse_ints(content[0]);
  require(mline.size() == 1 && mline[0] >= 0, "import_sdpa: bad variable count");
  const int m = static_cast<int>(mline[0]);
  const auto bline = parse_ints(content[1]);
  require(bline.size() == 1 && bline[0] >= 0, "import_sdpa: bad block count");
  const int nblocks = static_cast<int>(bline[0]);
  const auto sizes = parse_ints(content[2]);
  require(static_cast<int>(sizes.size()) == nblocks,
          "import_sdpa: block structure line does not match block count");
  const auto cvec = parse_doubles(content[3]);
  require(static_cast<int>(cvec.size()) == m,
          "import_sdpa: objective line does not match variable count");

  SdpProblem p;
  std::vector<int> var_blocks;
  var_blocks.reserve(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    var_blocks.push_back(p.add_scalar("x" + std::to_string(k + 1)));
  }
  for (int k = 0; k < m; ++k) {
    if (cvec[static_cast<size_t>(k)] != 0.0) {
      p.add_objective(var_blocks[static_cast<size_t>(k)],
                      cvec[static_cast<size_t>(k)]);
    }
  }

  // One MatExpr per block: constant is -F0, coefficient of x_k is F_k.
  std::vector<MatExpr> exprs;
  for (int b = 0; b < nblocks; ++b) {
    const Eigen::Index dim = std::abs(sizes[static_cast<size_t>(b)]);
    exprs.push_back(MatExpr::zero(dim, dim));
  }

  for (size_t li = 4; li < content.size(); ++li) {
    std::istringstream ss(content[li]);
    int matno, blkno;
    long i, j;
    double value;
    require(static_cast<bool>(ss >> matno >> blkno >> i >> j >> value),
            "import_sdpa: malformed entry line: " + content[li]);
    require(matno >= 0 && matno <= m, "import_sdpa: matno out of range");
    require(blkno >= 1 && blkno <= nblocks, "import_sdpa: blkno out of range");
    MatExpr& e = exprs[static_cast<size_t>(blkno - 1)];
    require(i >= 1 && j >= 1 && i <= e.rows() && j <= e.rows(),
            "import_sdpa: entry index out of range");
    Matrix coeff = Matrix::Zero(e.rows(), e.rows());
    coeff(i - 1, j - 1) = value;
    if (i != j) coeff(j - 1, i - 1) = value;
    if (matno == 0) {
      // F0 entry: block constant is -F0.
      MatExpr add = MatExpr::constant(-coeff);
      e = e + add;
    } else {
      MatExpr add = MatExpr::zero(e.rows(), e.rows());
      add.add_term(p.blocks()[static_cast<size_t>(
                                  var_blocks[static_cast<size_t>(matno - 1)])]
                       .first_var,
                   coeff);
      e = e + add;
    }
  }

  for (auto& e : exprs) p.add_psd(e);
  return p;
}

}  // namespace reluqc::sdp
