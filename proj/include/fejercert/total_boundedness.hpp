#pragma once

#include "fejercert/approximation.hpp"
#include "fejercert/moduli.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fejercert {

// I-modulus α (a 1/(k+1)-net of α(k)+1 points) to II-modulus k ↦ α(2k+1)+1.
Modulus modulus_I_to_II(const Modulus& alpha);

// II-modulus γ to I-modulus k ↦ γ(k)−1. Rejects γ(k)=0 on [0, check_upto]
// eagerly and at any later evaluation.
Modulus modulus_II_to_I(const Modulus& gamma, std::uint64_t check_upto = 64);

// [0,1]: k ↦ k+1.
Modulus tb_modulus_interval();

// Closed ball of radius b in ℝⁿ: k ↦ ⌈2(k+1)√n·b⌉ⁿ.
Modulus tb_modulus_ball(std::uint64_t n, const Rational& b);

// Convex hull of a set with II-modulus γ and norm bound b.
Modulus tb_modulus_convex_hull(const Modulus& gamma, const Rational& b);

// The closure has the same II-modulus.
Modulus tb_modulus_closure(const Modulus& gamma);

// δ_F(k) = 2k+1, ω_F(k) = max{4k+3, ω_T(4k+3)}.
ClosednessModuli uniform_closedness_from_continuity(const Modulus& omega_T);

struct DiameterWitness {
  Nat N;
  double distance = 0.0;
  std::vector<std::uint64_t> indices;  // n_0, n_1, ... up to N
};

// Runs n_{k+1} = ⌈max_{i,j≤k}{n_k, d(x_{n_i},y_{n_j}), d(x_{n_i},x_{n_j}), d(y_{n_i},y_{n_j})} + 3⌉
// from n_0 = 0 until d(x_N,y_N) < N. Throws DomainError when an index passes
// `cap`, or when n_{γ(0)} is reached without a witness (γ is then not a
// II-modulus for the space the sequences live in).
DiameterWitness diameter_witness(const std::function<Point(std::uint64_t)>& x,
                                 const std::function<Point(std::uint64_t)>& y, const Modulus& gamma,
                                 std::uint64_t cap = 1'000'000);

}  // namespace fejercert
