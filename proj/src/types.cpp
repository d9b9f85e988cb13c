#include "almm/types.hpp"

#include <cmath>

namespace almm {

namespace detail {

void require_finite(const char* name, const Matrix& m) {
  if (!m.allFinite()) {
    throw DataError(std::string(name) + " contains non-finite entries");
  }
}

void require_finite(const char* name, const Vector& v) {
  if (!v.allFinite()) {
    throw DataError(std::string(name) + " contains non-finite entries");
  }
}

}  // namespace detail

HyperspectralImage::HyperspectralImage(Matrix y, int spatial_rows,
                                       int spatial_cols,
                                       std::vector<double> wl)
    : data(std::move(y)), rows(spatial_rows), cols(spatial_cols),
      wavelengths(std::move(wl)) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw ContractError("HyperspectralImage: need D >= 1 and N >= 1");
  }
  detail::require_finite("HyperspectralImage.data", data);
  if (rows != 0 || cols != 0) {
    if (rows <= 0 || cols <= 0 ||
        static_cast<long>(rows) * cols != data.cols()) {
      throw ContractError(
          "HyperspectralImage: spatial dims (rows*cols) vs num_pixels N");
    }
  }
  if (!wavelengths.empty() &&
      static_cast<long>(wavelengths.size()) != data.rows()) {
    throw ContractError("HyperspectralImage: wavelengths vs num_bands D");
  }
}

EndmemberDictionary::EndmemberDictionary(Matrix a, std::vector<std::string> n)
    : data(std::move(a)), names(std::move(n)) {
  if (data.cols() < 1) {
    throw ContractError("EndmemberDictionary: need P >= 1");
  }
  detail::require_finite("EndmemberDictionary.data", data);
  if ((data.array() < 0.0).any()) {
    throw ContractError("EndmemberDictionary: negative entry vs signature >= 0");
  }
  for (Eigen::Index p = 0; p < data.cols(); ++p) {
    if (data.col(p).maxCoeff() <= 0.0) {
      throw ContractError("EndmemberDictionary: all-zero column " +
                          std::to_string(p));
    }
  }
  if (!names.empty() && static_cast<long>(names.size()) != data.cols()) {
    throw ContractError("EndmemberDictionary: names vs num_endmembers P");
  }
}

AbundanceMatrix::AbundanceMatrix(Matrix x, bool asc)
    : data(std::move(x)), asc_normalized(asc) {
  detail::require_finite("AbundanceMatrix.data", data);
  if ((data.array() < -kNegTol).any()) {
    throw ContractError("AbundanceMatrix: entry below -1e-12 vs ANC");
  }
  data = data.cwiseMax(0.0);
  if (asc_normalized) {
    for (Eigen::Index k = 0; k < data.cols(); ++k) {
      const double sum = data.col(k).sum();
      if (sum != 0.0 && std::abs(sum - 1.0) > kAscTol) {
        throw ContractError("AbundanceMatrix: column " + std::to_string(k) +
                            " sum vs ASC (got " + std::to_string(sum) + ")");
      }
    }
  }
}

ScalingFactors::ScalingFactors(Vector s) : values(std::move(s)) {
  detail::require_finite("ScalingFactors.values", values);
  if ((values.array() < 0.0).any()) {
    throw ContractError("ScalingFactors: negative entry vs S_k >= 0");
  }
}

VariabilityDictionary::VariabilityDictionary(Matrix e) : data(std::move(e)) {
  detail::require_finite("VariabilityDictionary.data", data);
}

Vector VariabilityDictionary::atom_norms() const {
  return data.colwise().norm();
}

VariabilityCoefficients::VariabilityCoefficients(Matrix b)
    : data(std::move(b)) {
  detail::require_finite("VariabilityCoefficients.data", data);
}

void SolverConfig::validate() const {
  if (!(rho > 1.0)) throw ContractError("SolverConfig: rho vs rho > 1");
  if (!(mu0 > 0.0 && mu0 <= mu_max)) {
    throw ContractError("SolverConfig: mu0 vs 0 < mu0 <= mu_max");
  }
  if (!(eps > 0.0)) throw ContractError("SolverConfig: eps vs eps > 0");
  if (max_iter < 1) throw ContractError("SolverConfig: max_iter vs >= 1");
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0 || eta < 0.0) {
    throw ContractError("SolverConfig: negative regularization weight");
  }
  if (num_atoms < 0) throw ContractError("SolverConfig: num_atoms vs >= 0");
}

}  // namespace almm
