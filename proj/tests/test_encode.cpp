#include "qflow/encode.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace qflow;

TEST_CASE("4x4 pitchfork: fracture nodes occupy indices 8..15") {
  const FractureProblem p = build_pitchfork_problem(4, 4, 1.0, 10.0, 10.0);
  const SmartPermutation perm = build_smart_permutation(p);
  CHECK(perm.n_qubits == 4);
  CHECK(perm.readout_qubit == 3);
  CHECK(perm.exact_split());
  std::vector<std::size_t> sorted = perm.mapping;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 16; ++i) CHECK(sorted[i] == i);
  std::size_t next = 8;
  for (std::size_t i = 0; i < 16; ++i) {
    if (p.fracture_mask[i]) CHECK(perm.mapping[i] == next++);
    else CHECK(perm.mapping[i] < 8);
  }
}

TEST_CASE("empty mask and a one-row mask on a 2x2 grid") {
  const FractureProblem uniform = build_1d_problem(4, 1.0);
  const SmartPermutation id = build_smart_permutation(uniform);
  for (std::size_t i = 0; i < 4; ++i) CHECK(id.mapping[i] < 4);
  CHECK(id.fracture_count == 0);
  CHECK(id.padded == 2);  // two matrix nodes fill the readout-bit-1 half

  const FractureProblem row = make_problem(2, 2, {5.0, 5.0, 1.0, 1.0}, 1.0);
  const SmartPermutation perm = build_smart_permutation(row);
  CHECK(perm.mapping[0] >= 2);
  CHECK(perm.mapping[1] >= 2);
  CHECK(perm.mapping[2] < 2);
  CHECK(perm.mapping[3] < 2);
}

TEST_CASE("oversized fracture is rejected") {
  const FractureProblem p = make_problem(1, 4, {5.0, 5.0, 5.0, 1.0}, 1.0);
  CHECK_THROWS_AS(build_smart_permutation(p), EncodingError);
}

TEST_CASE("permuting the system permutes the solution") {
  const FractureProblem p = build_pitchfork_problem(4, 8, 1.0, 10.0, 100.0);
  const LinearSystem s = assemble_system(p);
  const SmartPermutation perm = build_smart_permutation(p);
  const LinearSystem t = apply_permutation(s, perm);
  const SolutionVector xs = solve_reference(s);
  const SolutionVector xt = solve_reference(t);
  CHECK((xt.values - permute(xs.values, perm)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(t.kappa == doctest::Approx(s.kappa).epsilon(1e-12));
  CHECK(t.rhs.norm() == doctest::Approx(1.0));

  const RMatrix a = s.dense();
  const RMatrix b = t.dense();
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 32; ++j)
      CHECK(b(static_cast<Eigen::Index>(perm.mapping[i]), static_cast<Eigen::Index>(perm.mapping[j])) ==
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));

  CHECK_THROWS_AS(permute(RVector::Ones(3), perm), DimensionError);
}

TEST_CASE("marginals: exact equality with the mask sum, uniform state, and shots") {
  const FractureProblem p = build_pitchfork_problem(4, 4, 1.0, 10.0, 10.0);
  const SmartPermutation perm = build_smart_permutation(p);
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    RVector probs(16);
    for (auto& x : probs) x = u(rng);
    probs /= probs.sum();
    double brute = 0;
    for (std::size_t i = 0; i < 16; ++i)
      if (p.fracture_mask[i]) brute += probs(static_cast<Eigen::Index>(i));
    const FractureMarginal m = fracture_marginal(permute(probs, perm), perm);
    CHECK(m.p_fracture == brute);
    CHECK(m.p_fracture + m.p_matrix == 1.0);
    CHECK(mask_probability(permute(probs, perm), perm, p.fracture_mask) == brute);
  }

  const RVector uniform = RVector::Constant(16, 1.0 / 16);
  CHECK(fracture_marginal(uniform, perm).p_fracture == doctest::Approx(8.0 / 16));

  const SolutionVector x = solve_reference(assemble_system(p));
  const RVector probs = permute(x.values.cwiseAbs2(), perm);
  const double exact = fracture_marginal(probs, perm).p_fracture;
  const ShotCounts counts = sample_shots(probs, 100000, 17);
  const double shots = fracture_marginal(counts, perm).p_fracture;
  CHECK(std::abs(shots - exact) <= 3 * std::sqrt(exact * (1 - exact) / 1e5));
}
