#pragma once

// Moving planes in a direction e: the support value Lambda_e, the critical
// position lambda_e, reflected domains, and the tangency / orthogonality
// classification of the critical configuration.

#include <nlohmann/json.hpp>

#include <string_view>
#include <vector>

#include "nlstab/domains.hpp"

namespace nlstab {

enum class PlaneCase { kInternalTangency, kBoundaryOrthogonality, kUnresolved };

std::string_view to_string(PlaneCase c);

struct CriticalPlaneResult {
  Point e;
  double Lambda = 0.0;
  double lambda = 0.0;
  PlaneCase case_tag = PlaneCase::kUnresolved;
  Point witness;
  double tol = 1e-6;

  bool resolved() const { return case_tag != PlaneCase::kUnresolved; }
};

nlohmann::json to_json(const CriticalPlaneResult& r);

struct CriticalPlaneOptions {
  double tol = 1e-6;
  int samples = 8192;
  int scan_steps = 200;       // downward scan step is Lambda / scan_steps
  int refine_top = 8;         // worst samples refined along their chart
  double threshold = 1e-12;   // level excess counted as a violation
};

/// x - 2 (x.e - mu) e.
Point reflect(const Point& x, double mu, const Point& e);

/// sup of x.e over the domain (chart samples plus Brent refinement).
double support_value(const ImplicitDomain& d, const Point& e);

struct Violation {
  double value = -1.0;  // max level at reflected cap samples; <= 0 means inclusion
  Point boundary_point;  // cap point whose reflection is worst
  bool any_cap = false;
};

/// max over boundary samples q with q.e > mu of level(reflect(q, mu, e)),
/// refined along the charts around the worst samples.
Violation violation(const ImplicitDomain& d, const std::vector<BoundarySample>& samples, double mu,
                    const Point& e, int refine_top = 8);

CriticalPlaneResult critical_lambda(const ImplicitDomain& d, const Point& e,
                                    const CriticalPlaneOptions& opts = {});

/// Membership x -> d.contains(reflect(x, lambda, e)).
ImplicitDomain reflected_domain(const ImplicitDomain& d, const CriticalPlaneResult& res);

}  // namespace nlstab
