#pragma once

#include "swing/lsmc/contract.hpp"

namespace swing::lsmc {

/// Daily swing on the day-ahead market of the synthetic curve: fixings on
/// `n_days` consecutive days from 2018-05-01, N in [0, 1] MWh, fixed strike
/// at the May 2018 one-month futures price.
SwingContract reference_contract(const market::InitialCurve& curve, double C_m, double C_M, SwingMode mode,
                                 int n_days = 31);

/// Same delivery with the strike set by the May 2018 futures averaged over
/// the 20 days up to its last trading date.
SwingContract floating_reference_contract(const market::InitialCurve& curve, double C_m, double C_M, SwingMode mode,
                                          int n_days = 31);

} // namespace swing::lsmc
