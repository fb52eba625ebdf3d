// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace onebit {

enum class Method {
    exact_enum,
    lower_bound,
    quadratic,
    unquantized_quadratic,
    iid_closed_form,
    upper_bound_prop1,
};

std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);

/// One computed rate point. value is in nats, per block or per channel use
/// according to per_block; std_error is the propagated estimator error
/// (zero for deterministic methods).
struct RateReport {
    double value = 0.0;
    double std_error = 0.0;
    Method method = Method::exact_enum;
    double snr = 0.0;
    bool per_block = true;
};

/// Decimal with 12 significant digits, the format used by all file output.
std::string format_sig12(double v);

}  // namespace onebit
