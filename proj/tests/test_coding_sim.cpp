#include "doctest.h"

#include <cmath>
#include <complex>

#include "eact/channel_spec.hpp"
#include "eact/coding_sim.hpp"
#include "eact/operator_core.hpp"
#include "eact/random.hpp"

using namespace eact;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Brute-force square-root-measurement success probability for explicit signal
// states: P_s = (1/M) sum_m tr[ (S^-1/2 s_m S^-1/2) s_m ] with S = sum s_m.
double srm_success_oracle(const std::vector<Matrix>& signals) {
  Matrix sum = Matrix::Zero(signals[0].rows(), signals[0].cols());
  for (const Matrix& s : signals) sum += s;
  const Matrix y = matrix_pow(sum, -0.5, /*support_only=*/true);
  double total = 0.0;
  for (const Matrix& s : signals) {
    const Matrix e = y * s * y;
    total += (e * s).trace().real();
  }
  return total / double(signals.size());
}

}  // namespace

TEST_CASE("Heisenberg-Weyl operators: explicit qubit cases and algebra") {
  // V_{0,0} = I, V_{1,0} = X, V_{0,1} = Z, V_{1,1} = XZ
  CHECK((heisenberg_weyl({2, 0, 0}) - Matrix::Identity(2, 2)).norm() ==
        doctest::Approx(0.0));
  Matrix x = Matrix::Zero(2, 2), z = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  CHECK((heisenberg_weyl({2, 1, 0}) - x).norm() == doctest::Approx(0.0));
  CHECK((heisenberg_weyl({2, 0, 1}) - z).norm() == doctest::Approx(0.0));

  // unitarity and the orthogonality tr[V_a^dag V_b] = d delta_ab for d = 3
  for (Index y1 = 0; y1 < 3; ++y1)
    for (Index z1 = 0; z1 < 3; ++z1) {
      const Matrix v = heisenberg_weyl({3, y1, z1});
      CHECK((v * v.adjoint() - Matrix::Identity(3, 3)).norm() ==
            doctest::Approx(0.0).epsilon(1e-12));
      for (Index y2 = 0; y2 < 3; ++y2)
        for (Index z2 = 0; z2 < 3; ++z2) {
          const Matrix w = heisenberg_weyl({3, y2, z2});
          const double overlap = std::abs((v.adjoint() * w).trace());
          CHECK(overlap == doctest::Approx(y1 == y2 && z1 == z2 ? 3.0 : 0.0)
                               .epsilon(1e-10));
        }
    }

  // phase convention: V_{y,z}|x> = e^{2 pi i x z / d} |x + y mod d>
  const Matrix v = heisenberg_weyl({3, 1, 2});
  const Complex got = v(0, 2);  // x = 2 -> x + y = 0
  const Complex expect = std::polar(1.0, 2.0 * kPi * 2.0 * 2.0 / 3.0);
  CHECK(std::abs(got - expect) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("transpose transfer identity: (U x I)|Phi> = (I x U^T)|Phi>") {
  Rng rng(3);
  for (Index d : {2, 3}) {
    const PureState phi = maximally_entangled(d);
    for (Index y = 0; y < d; ++y)
      for (Index z = 0; z < d; ++z) {
        const Matrix u = heisenberg_weyl({d, y, z});
        const Matrix id = Matrix::Identity(d, d);
        const Vector lhs = tensor_product(u, id) * phi.amplitudes;
        const Vector rhs = tensor_product(id, u.transpose().eval()) * phi.amplitudes;
        CHECK((lhs - rhs).norm() == doctest::Approx(0.0).epsilon(1e-12));
      }
  }
}

TEST_CASE("dense coding on the identity qubit channel: perfect at rate 2") {
  const auto spec = preset_channel("identity", "2");
  for (Index n : {1, 2}) {
    const EACode code = build_ea_code(spec.channel, n, 2.0, 77);
    CHECK(code.message_count == ipow(4, n));
    CHECK_FALSE(code.rate_warning);
    const double ps = success_probability(spec.channel, code);
    CHECK(ps == doctest::Approx(1.0).epsilon(1e-12));
    // sender-side (transposed) and receiver-side evaluations agree
    CHECK(success_probability(spec.channel, code, /*receiver_side=*/true) ==
          doctest::Approx(ps).epsilon(1e-12));
  }
}

TEST_CASE("success probability matches a brute-force SRM oracle at n = 1") {
  const auto spec = preset_channel("depolarizing", "0.2");
  const EACode code = build_ea_code(spec.channel, 1, 1.5, 123);
  const double ps = success_probability(spec.channel, code);

  // rebuild the signal states from the stored encoders directly
  std::vector<Matrix> signals;
  for (Index m = 0; m < code.message_count; ++m) {
    const Matrix enc = code.encoders[size_t(m)][0];
    const Matrix id = Matrix::Identity(2, 2);
    const Matrix u = tensor_product(enc, id);
    const DensityOperator encoded(u * code.shared.mat * u.adjoint(), code.shared.dims);
    signals.push_back(apply_channel(spec.channel, encoded, 0).mat);
  }
  CHECK(ps == doctest::Approx(srm_success_oracle(signals)).epsilon(1e-12));

  // decoder elements form a sub-POVM dominated by the support projector
  Matrix povm = Matrix::Zero(4, 4);
  for (Index m = 0; m < code.message_count; ++m)
    povm += decoder_element(spec.channel, code, m);
  auto es = hermitian_eigensystem(povm);
  CHECK(es.values.minCoeff() >= -1e-10);
  CHECK(es.values.maxCoeff() <= 1.0 + 1e-10);
}

TEST_CASE("rate padding scales the success probability by exactly M / M'") {
  const auto spec = preset_channel("depolarizing", "0.15");
  const EACode code = build_ea_code(spec.channel, 2, 1.0, 31);
  const double ps = success_probability(spec.channel, code);
  const EACode padded = pad_code(code, code.message_count * 3);
  const double ps_padded = success_probability(spec.channel, padded);
  CHECK(ps_padded ==
        doctest::Approx(ps * double(code.message_count) / double(padded.total_messages()))
            .epsilon(1e-12));
  CHECK_THROWS_AS(pad_code(code, code.message_count - 1), ShapeError);
}

TEST_CASE("codes are deterministic in the seed and vary across seeds") {
  const auto spec = preset_channel("depolarizing", "0.1");
  const EACode a = build_ea_code(spec.channel, 2, 1.2, 99);
  const EACode b = build_ea_code(spec.channel, 2, 1.2, 99);
  const EACode c = build_ea_code(spec.channel, 2, 1.2, 100);
  CHECK(success_probability(spec.channel, a) ==
        success_probability(spec.channel, b));
  CHECK(a.hw_indices == b.hw_indices);
  CHECK(a.hw_indices != c.hw_indices);
}

TEST_CASE("block structure: non-uniform shared state changes the signal family") {
  const auto spec = preset_channel("identity", "4");
  // two qubit blocks sharing Bell pairs vs one ququart block
  const EACode split = build_ea_code(spec.channel, 1, 2.0, 5, {{0.5, 2}, {0.5, 2}});
  const EACode whole = build_ea_code(spec.channel, 1, 2.0, 5);
  CHECK(split.blocks.size() == 2);
  CHECK(whole.blocks.size() == 1);
  const double ps_split = success_probability(spec.channel, split);
  const double ps_whole = success_probability(spec.channel, whole);
  CHECK(ps_split > 0.0);
  CHECK(ps_split <= 1.0 + 1e-12);
  // whole-block code is dense coding: 4 orthogonal signal states
  CHECK(ps_whole == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulate: records, fit, and the synthetic-slope sanity check") {
  const auto spec = preset_channel("depolarizing", "0.3");
  const auto res = simulate(spec.channel, 1.8, {1, 2, 3, 4}, 7);
  CHECK(res.records.size() == 4);
  for (const auto& rec : res.records) {
    CHECK(rec.p_success > 0.0);
    CHECK(rec.p_success <= 1.0 + 1e-12);
  }
  CHECK(res.fit.points_used == 4);
  CHECK(res.fit.slope > 0.0);  // above-capacity rate decays

  // empirical_exponent recovers an exact geometric decay
  std::vector<SimulationRecord> synth;
  for (Index n = 1; n <= 5; ++n)
    synth.push_back({n, 4, std::pow(2.0, -0.37 * double(n)), 0});
  const auto fit = empirical_exponent(synth);
  CHECK(fit.slope == doctest::Approx(0.37).epsilon(1e-10));
  CHECK(fit.residual == doctest::Approx(0.0).epsilon(1e-9));

  synth.resize(2);
  CHECK_THROWS_AS(empirical_exponent(synth), DomainError);
}

TEST_CASE("code construction rejects invalid requests") {
  const auto spec = preset_channel("identity", "2");
  CHECK_THROWS_AS(build_ea_code(spec.channel, 0, 1.0, 1), ShapeError);
  CHECK_THROWS_AS(build_ea_code(spec.channel, 10, 1.0, 1), SizeLimitError);
  // negative rate clamps to a single message rather than failing
  CHECK(build_ea_code(spec.channel, 1, -0.5, 1).message_count == 1);
  // blocks must partition the input dimension and carry unit total weight
  CHECK_THROWS_AS(build_ea_code(spec.channel, 1, 1.0, 1, {{1.0, 3}}), ShapeError);
  CHECK_THROWS_AS(build_ea_code(spec.channel, 1, 1.0, 1, {{0.4, 2}}), InvariantError);
}

TEST_CASE("entanglement fidelity: perfect teleportation-style code scores 1") {
  // trivial identity code: k = 2, encoder swaps the message into the channel
  // input, decoder reads it back
  const Index k = 2;
  const auto spec = preset_channel("identity", "2");
  std::vector<Matrix> enc_kraus, dec_kraus;
  // encoder (M x A~) -> A: keep the message, trace out the share
  for (Index i = 0; i < k; ++i) {
    Matrix e = Matrix::Zero(2, 2 * 2);
    e(0, 0 * 2 + i) = 1.0;
    e(1, 1 * 2 + i) = 1.0;
    enc_kraus.push_back(e);
  }
  // decoder (B x B~) -> M: same shape in reverse
  for (Index i = 0; i < k; ++i) {
    Matrix d = Matrix::Zero(2, 2 * 2);
    d(0, 0 * 2 + i) = 1.0;
    d(1, 1 * 2 + i) = 1.0;
    dec_kraus.push_back(d);
  }
  QuantumCode code;
  code.k = k;
  code.shared = maximally_entangled(2).density();
  code.encoder = QuantumChannel(4, 2, enc_kraus);
  code.decoder = QuantumChannel(4, 2, dec_kraus);
  const double f = entanglement_fidelity(spec.channel, code);
  CHECK(f == doctest::Approx(1.0).epsilon(1e-12));

  // the fully depolarizing channel destroys the correlation: the output is
  // maximally mixed on M' x M, so the (root) fidelity is sqrt(1/k^2) = 1/k
  const auto noisy = preset_channel("depolarizing", "1");
  const double fn = entanglement_fidelity(noisy.channel, code);
  CHECK(fn == doctest::Approx(0.5).epsilon(1e-10));
}
