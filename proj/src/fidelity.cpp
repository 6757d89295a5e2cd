// Copyright 2026 The spinqed Authors
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

#include "spinqed/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Geometry>
#include <fmt/format.h>

namespace spinqed {

namespace {

using Mat3 = Eigen::Matrix3d;
using Mat4d = Eigen::Matrix4d;

// Single-qubit input states |0⟩, |1⟩, |+⟩, |+i⟩ and the coefficients that
// rebuild I, X, Y, Z from their projectors.
std::array<Mat2, 4> input_states() {
  const double h = 0.5;
  Mat2 p0, p1, px, py;
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  px << h, h, h, h;
  py << h, cplx(0, -h), cplx(0, h), h;
  return {p0, p1, px, py};
}

constexpr double kPauliFromStates[4][4] = {
    {1, 1, 0, 0},    // I
    {-1, -1, 2, 0},  // X
    {-1, -1, 0, 2},  // Y
    {1, -1, 0, 0},   // Z
};

const std::array<Mat4, 16>& pauli_basis() {
  static const std::array<Mat4, 16> basis = [] {
    std::array<Mat4, 16> b;
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) b[4 * j + k] = pauli2(j, k);
    }
    return b;
  }();
  return basis;
}

Ptm ptm_of_unitary(const Mat4& u) { return ProcessMap::from_unitary(u).ptm(); }

Mat4d single_ptm(const Mat3& o) {
  Mat4d r = Mat4d::Zero();
  r(0, 0) = 1.0;
  r.block<3, 3>(1, 1) = o;
  return r;
}

Ptm kron_ptm(const Mat4d& a, const Mat4d& b) {
  Ptm out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  }
  return out;
}

// argmax over SO(3) of tr(Oᵀ K).
Mat3 procrustes(const Mat3& k) {
  Eigen::JacobiSVD<Mat3> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

// Reduce a 16×16 coefficient matrix to the 4×4 matrix seen by one qubit
// factor, holding the other factor's PTM fixed.
Mat4d contract(const Ptm& m, const Mat4d& other, int qubit) {
  Mat4d n = Mat4d::Zero();
  for (int j = 0; j < 4; ++j) {
    for (int jp = 0; jp < 4; ++jp) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) {
        for (int kp = 0; kp < 4; ++kp) {
          acc += qubit == 1 ? other(k, kp) * m(4 * j + k, 4 * jp + kp) : other(k, kp) * m(4 * k + j, 4 * kp + jp);
        }
      }
      n(j, jp) = acc;
    }
  }
  return n;
}

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

Mat3 euler_zyz(double a, double b, double c) {
  return (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(c, Eigen::Vector3d::UnitZ()))
      .toRotationMatrix();
}

struct Ascent {
  std::array<Mat3, 4> o;  // A1, A2, B1, B2
  double value = 0.0;     // tr(R_Tᵀ R_E)
};

Ascent ascend(const Ptm& re, const Ptm& ru, std::array<Mat3, 4> o, const LocalSearchOptions& opt) {
  double prev = -1e300;
  double value = 0.0;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    for (int f = 0; f < 4; ++f) {
      const Ptm ra = kron_ptm(single_ptm(o[0]), single_ptm(o[1]));
      const Ptm rb = kron_ptm(single_ptm(o[2]), single_ptm(o[3]));
      // tr(R_Aᵀ · R_E R_Bᵀ R_Uᵀ) and tr(R_Bᵀ · R_Uᵀ R_Aᵀ R_E).
      const Ptm m = f < 2 ? Ptm(re * rb.transpose() * ru.transpose()) : Ptm(ru.transpose() * ra.transpose() * re);
      const int partner = f ^ 1;
      const int qubit = (f % 2 == 0) ? 1 : 2;
      const Mat4d n = contract(m, single_ptm(o[partner]), qubit);
      o[f] = procrustes(n.block<3, 3>(1, 1));
      value = n(0, 0) + (o[f].transpose() * n.block<3, 3>(1, 1)).trace();
    }
    if (value - prev <= opt.tolerance * std::max(1.0, std::abs(value))) break;
    prev = value;
  }
  return Ascent{o, value};
}

}  // namespace

Ptm ProcessMap::ptm() const {
  const auto& p = pauli_basis();
  Ptm r;
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) r(a, b) = (p[a] * images[b]).trace().real() / 4.0;
  }
  return r;
}

double ProcessMap::trace_loss() const { return 1.0 - images[0].trace().real() / 4.0; }

Mat4 ProcessMap::apply(const Mat4& rho) const {
  const auto& p = pauli_basis();
  Mat4 out = Mat4::Zero();
  for (int b = 0; b < 16; ++b) out += ((p[b] * rho).trace() / 4.0) * images[b];
  return out;
}

ProcessMap ProcessMap::from_kraus(const std::vector<Mat4>& kraus) {
  ProcessMap m;
  const auto& p = pauli_basis();
  for (int b = 0; b < 16; ++b) {
    m.images[b] = Mat4::Zero();
    for (const Mat4& k : kraus) m.images[b] += k * p[b] * k.adjoint();
  }
  return m;
}

ProcessMap ProcessMap::depolarizing() {
  ProcessMap m;
  for (int b = 0; b < 16; ++b) m.images[b] = Mat4::Zero();
  m.images[0] = Mat4::Identity();
  return m;
}

ProcessMap ProcessMap::mix(const ProcessMap& a, const ProcessMap& b, double lambda) {
  ProcessMap m;
  for (int i = 0; i < 16; ++i) m.images[i] = lambda * a.images[i] + (1.0 - lambda) * b.images[i];
  return m;
}

void Embedding::validate() const {
  int n = 1;
  for (int d : dims) {
    if (d < 1) throw InvalidArgument("Embedding: dims must be positive");
    n *= d;
  }
  if (isometry.rows() != n || isometry.cols() != 4) {
    throw InvalidArgument(fmt::format("Embedding: isometry must be {}x4", n));
  }
  if ((isometry.adjoint() * isometry - Mat::Identity(4, 4)).norm() > 1e-10) {
    throw InvalidArgument("Embedding: computational states are not orthonormal");
  }
  for (int s : qubit_subsystems) {
    if (s < 0 || s >= static_cast<int>(dims.size())) throw InvalidArgument("Embedding: bad qubit subsystem index");
  }
}

ProcessMap reconstruct_process(const Mat& evolved, const Embedding& emb, Reduction mode) {
  emb.validate();
  if (evolved.rows() != emb.isometry.rows() || evolved.cols() != 4) {
    throw InvalidArgument("reconstruct_process: evolved columns do not match the embedding");
  }
  if (mode == Reduction::PartialTrace && emb.qubit_subsystems.empty()) {
    throw InvalidArgument("reconstruct_process: partial trace needs qubit subsystems");
  }
  const Mat4 m = emb.isometry.adjoint() * evolved;
  const auto inputs = input_states();

  std::array<Mat4, 16> outputs;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Mat4 rho = kron2(inputs[a], inputs[b]);
      if (mode == Reduction::Project) {
        outputs[4 * a + b] = m * rho * m.adjoint();
      } else {
        const OperatorMatrix full(emb.dims, evolved * rho * evolved.adjoint());
        outputs[4 * a + b] = partial_trace(full, emb.qubit_subsystems).matrix();
      }
    }
  }

  ProcessMap out;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      Mat4 img = Mat4::Zero();
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const double c = kPauliFromStates[j][a] * kPauliFromStates[k][b];
          if (c != 0.0) img += c * outputs[4 * a + b];
        }
      }
      out.images[4 * j + k] = img;
    }
  }
  return out;
}

ProcessMap reconstruct_process(const OperatorMatrix& u, const Embedding& emb, Reduction mode) {
  emb.validate();
  if (u.dim() != emb.isometry.rows()) throw InvalidArgument("reconstruct_process: propagator dimension mismatch");
  return reconstruct_process(Mat(u.matrix() * emb.isometry), emb, mode);
}

double leakage(const Mat& evolved, const Embedding& emb) {
  const Mat m = emb.isometry.adjoint() * evolved;
  return 1.0 - m.squaredNorm() / 4.0;
}

double average_gate_fidelity(const ProcessMap& process, const Mat4& target, std::vector<std::string>* warnings) {
  if ((target.adjoint() * target - Mat4::Identity()).norm() > 1e-10) {
    throw InvalidArgument("average_gate_fidelity: target is not unitary");
  }
  const auto& p = pauli_basis();
  cplx acc = 0.0;
  for (int b = 0; b < 16; ++b) acc += (target * p[b] * target.adjoint() * process.images[b]).trace();
  double f = 0.2 + acc.real() / 80.0;
  if (f < -1e-6 || f > 1.0 + 1e-6) {
    if (warnings != nullptr) warnings->push_back(fmt::format("fidelity {:.9g} outside [0, 1], clipped", f));
  }
  return std::clamp(f, 0.0, 1.0);
}

double unitary_fidelity(const Mat4& u, const Mat4& target) {
  return (4.0 + std::norm((target.adjoint() * u).trace())) / 20.0;
}

Mat2 su2_from_rotation(const Eigen::Matrix3d& r) {
  const Eigen::Quaterniond q(r);
  return q.w() * Mat2::Identity() - cplx(0, 1) * (q.x() * pauli(1) + q.y() * pauli(2) + q.z() * pauli(3));
}

Eigen::Matrix3d rotation_from_su2(const Mat2& u) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (pauli(i + 1) * u * pauli(j + 1) * u.adjoint()).trace().real();
  }
  return r;
}

FidelityReport maximize_over_local(const ProcessMap& process, const Mat4& target, const LocalSearchOptions& opt) {
  if (opt.restarts < 1) throw InvalidArgument("maximize_over_local: restarts must be >= 1");
  FidelityReport rep;
  rep.fidelity_raw = average_gate_fidelity(process, target);
  rep.leakage = process.trace_loss();

  const Ptm re = process.ptm();
  const Ptm ru = ptm_of_unitary(target);
  static constexpr int kBases[12] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

  std::vector<Ascent> results(opt.restarts);
  auto run = [&](int r) {
    std::array<Mat3, 4> start;
    if (r == 0) {
      start.fill(Mat3::Identity());
    } else {
      const std::uint64_t idx = opt.seed * 1000003ULL + static_cast<std::uint64_t>(r);
      for (int f = 0; f < 4; ++f) {
        const double a = kTwoPi * radical_inverse(idx, kBases[3 * f]);
        const double b = std::acos(1.0 - 2.0 * radical_inverse(idx, kBases[3 * f + 1]));
        const double c = kTwoPi * radical_inverse(idx, kBases[3 * f + 2]);
        start[f] = euler_zyz(a, b, c);
      }
    }
    results[r] = ascend(re, ru, start, opt);
  };

  const int threads = std::clamp(opt.threads, 1, opt.restarts);
  if (threads == 1) {
    for (int r = 0; r < opt.restarts; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < opt.restarts; r += threads) run(r);
      });
    }
    for (auto& t : pool) t.join();
  }

  int best = 0;
  double worst = results[0].value;
  for (int r = 1; r < opt.restarts; ++r) {
    if (results[r].value > results[best].value) best = r;
    worst = std::min(worst, results[r].value);
  }
  const double best_f = 0.2 + results[best].value / 20.0;
  for (const Ascent& a : results) {
    if (best_f - (0.2 + a.value / 20.0) <= 1e-4) ++rep.restarts_at_best;
  }
  rep.restart_spread = (results[best].value - worst) / 20.0;
  rep.converged = rep.restarts_at_best >= std::min(2, opt.restarts);
  for (int f = 0; f < 4; ++f) rep.locals[f] = su2_from_rotation(results[best].o[f]);

  // Score the returned locals directly so the report is self-consistent.
  const Mat4 tuned = kron2(rep.locals[0], rep.locals[1]) * target * kron2(rep.locals[2], rep.locals[3]);
  rep.fidelity_local_max = std::max(average_gate_fidelity(process, tuned), rep.fidelity_raw);
  return rep;
}

Mat4 cnot_gate() {
  Mat4 g = Mat4::Zero();
  g(0, 0) = g(1, 1) = g(2, 3) = g(3, 2) = 1.0;
  return g;
}

Mat4 iswap_gate() {
  Mat4 g = Mat4::Zero();
  g(0, 0) = g(3, 3) = 1.0;
  g(1, 2) = g(2, 1) = cplx(0, 1);
  return g;
}

}  // namespace spinqed
