// SPDX-License-Identifier: Apache-2.0
#include "onebit/report.hpp"

#include <cstdio>

namespace onebit {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::exact_enum:
            return "exact-enum";
        case Method::lower_bound:
            return "lower-bound";
        case Method::quadratic:
            return "quadratic";
        case Method::unquantized_quadratic:
            return "unquantized-quadratic";
        case Method::iid_closed_form:
            return "iid-closed-form";
        case Method::upper_bound_prop1:
            return "upper-bound-prop1";
    }
    return "unknown";
}

std::optional<Method> method_from_name(std::string_view name) {
    for (Method m : {Method::exact_enum, Method::lower_bound, Method::quadratic,
                     Method::unquantized_quadratic, Method::iid_closed_form,
                     Method::upper_bound_prop1}) {
        if (method_name(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace onebit
