#pragma once

#include <array>
#include <optional>
#include <string>

#include "svmf/em.hpp"

namespace svmf {

enum class CriterionKind { AIC, BIC, RIC, RICc, EBIC };

inline constexpr std::array<CriterionKind, 5> kAllCriteria{CriterionKind::AIC, CriterionKind::BIC,
                                                           CriterionKind::RIC, CriterionKind::RICc,
                                                           CriterionKind::EBIC};

struct Criterion {
  CriterionKind kind = CriterionKind::BIC;
  double ebic_gamma = 0.5;
};

std::string to_string(CriterionKind kind);
CriterionKind parse_criterion(const std::string& name);

/// Number of free parameters: (K - 1) proportions, K concentrations (1 when
/// shared), and max(1, nnz(mu_k) - 1) per mean.
int count_free_params(const MixtureParams& params);

/// phi(n, d) of the criterion. Throws DomainError where the coefficient is
/// undefined (RIC needs d >= 2, RICc needs d >= 3).
double criterion_coefficient(const Criterion& c, double n, double d);

/// phi(n, d) * C - 2 log L.
double information_criterion(double log_likelihood, double free_params, double n, double d, const Criterion& c);
double information_criterion(const FitResult& fit, Index n, Index d, const Criterion& c);

/// Criterion value when defined for (n, d), nullopt otherwise.
std::optional<double> try_information_criterion(const FitResult& fit, Index n, Index d, const Criterion& c);

}  // namespace svmf
