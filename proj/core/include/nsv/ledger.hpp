#pragma once

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace nsv {

/// Per-step record of the functionals that enter the energy identity and
/// the a-priori estimates.  Space integrals are over the whole box.
struct LedgerRow {
  long step = 0;
  double t = 0.0;
  double l2_sq = 0.0;             ///< ||v||_2^2
  double kappa_grad_sq = 0.0;     ///< kappa ||grad v||_2^2
  double grad_p = 0.0;            ///< ||grad v||_p^p
  double sym_grad_p = 0.0;        ///< ||D(v)||_p^p
  double reg_grad_beta = 0.0;     ///< (1/n) ||grad v||_beta^beta
  double reg_sym_grad_beta = 0.0; ///< (1/n) ||D(v)||_beta^beta
  double reg_stress_dual = 0.0;   ///< ||(1/n) B(v)||_{beta'}^{beta'}
  double forcing_work = 0.0;      ///< <f, v>
  double forcing_dual = 0.0;      ///< ||f||_{p'}^{p'}
  double dt_l2_sq = 0.0;          ///< ||d_t v||_2^2
  double kappa_dt_grad_sq = 0.0;  ///< kappa ||grad d_t v||_2^2
  int iterations = 0;             ///< fixed-point sweeps of the step that produced this state

  double energy() const { return l2_sq + kappa_grad_sq; }
};

/// Column order of the CSV ledger.  Never reorder: downstream tools key on it.
inline constexpr std::array<std::string_view, 14> kLedgerColumns{
    "step",          "t",           "l2_sq",           "kappa_grad_sq", "grad_p",
    "sym_grad_p",    "reg_grad_beta", "reg_sym_grad_beta", "reg_stress_dual",
    "forcing_work",  "forcing_dual",  "dt_l2_sq",        "kappa_dt_grad_sq", "iterations"};

struct EnergyLedger {
  double nu = 0.0;
  double kappa = 0.0;
  double p = 2.0;
  double beta = 2.0;
  double reg_weight = 0.0;
  std::vector<LedgerRow> rows;

  bool empty() const { return rows.empty(); }
};

/// Writes the ledger with full round-trip precision (17 significant digits).
void write_ledger_csv(std::ostream& os, const EnergyLedger& ledger);

}  // namespace nsv
