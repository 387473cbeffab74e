#include "nsv/ledger.hpp"

#include <cstdio>
#include <ostream>

namespace nsv {

namespace {

void put(std::ostream& os, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

}  // namespace

void write_ledger_csv(std::ostream& os, const EnergyLedger& ledger) {
  for (std::size_t i = 0; i < kLedgerColumns.size(); ++i) os << (i ? "," : "") << kLedgerColumns[i];
  os << '\n';
  for (const auto& r : ledger.rows) {
    os << r.step << ',';
    for (double x : {r.t, r.l2_sq, r.kappa_grad_sq, r.grad_p, r.sym_grad_p, r.reg_grad_beta,
                     r.reg_sym_grad_beta, r.reg_stress_dual, r.forcing_work, r.forcing_dual, r.dt_l2_sq,
                     r.kappa_dt_grad_sq}) {
      put(os, x);
      os << ',';
    }
    os << r.iterations << '\n';
  }
}

}  // namespace nsv
