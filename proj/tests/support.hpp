#pragma once

#include "iterlab/haar.hpp"
#include "iterlab/tensor.hpp"

namespace testsupport {

inline iterlab::Matrix random_matrix(Eigen::Index d, iterlab::RngStream& rng) {
  return iterlab::ginibre(d, rng);
}

inline iterlab::Matrix random_hermitian(Eigen::Index d, iterlab::RngStream& rng) {
  return iterlab::hermitize(iterlab::ginibre(d, rng));
}

inline iterlab::Matrix random_psd(Eigen::Index d, iterlab::RngStream& rng) {
  const iterlab::Matrix a = iterlab::ginibre(d, rng);
  return a * a.adjoint();
}

inline iterlab::Matrix random_density(Eigen::Index d, iterlab::RngStream& rng) {
  iterlab::Matrix p = random_psd(d, rng);
  return p / p.trace().real();
}

}  // namespace testsupport
