#include "logcleanse/quality.hpp"

#include <algorithm>

namespace logcleanse {

double nonsensitivity(const std::vector<Term>& terms) {
    if (terms.empty()) throw EmptyEntry("nonsensitivity of an empty entry");
    const auto clean = std::count_if(terms.begin(), terms.end(),
                                     [](const Term& t) { return !t.sensitive; });
    return static_cast<double>(clean) / static_cast<double>(terms.size());
}

double semantic_fraction(const std::vector<Term>& terms) {
    if (terms.empty()) throw EmptyEntry("semantic of an empty entry");
    const auto meaningful = std::count_if(terms.begin(), terms.end(),
                                          [](const Term& t) { return t.semantic; });
    return static_cast<double>(meaningful) / static_cast<double>(terms.size());
}

double reduction(EntryState state, std::size_t original_length, std::size_t current_length) {
    if (state != EntryState::encoded) return kTextualReduction;
    if (original_length == 0) return 0.0;
    const double r = 1.0 - static_cast<double>(current_length) / static_cast<double>(original_length);
    return std::clamp(r, 0.0, 1.0);
}

QualityScore score(int usefulness, double n_value, double s_value, double r_value,
                   Coefficients coefficients) {
    QualityScore out;
    out.usefulness = usefulness;
    out.nonsensitivity = n_value;
    out.semantic = s_value;
    out.reduction = r_value;
    out.coefficients = coefficients;
    out.q = static_cast<double>(usefulness) * (coefficients.n * n_value) *
            (coefficients.s * s_value) * (coefficients.r * r_value);
    return out;
}

}  // namespace logcleanse
