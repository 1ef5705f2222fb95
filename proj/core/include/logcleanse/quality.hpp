#pragma once

#include <cstddef>
#include <vector>

#include "logcleanse/entry.hpp"
#include "logcleanse/policy.hpp"

namespace logcleanse {

/// Entry quality: q = U * (n*N) * (s*S) * (r*R).
struct QualityScore {
    int usefulness = 1;          // U, 0 or 1
    double nonsensitivity = 0;   // N, fraction of terms not sensitive
    double semantic = 0;         // S, fraction of terms with semantic
    double reduction = 0;        // R
    Coefficients coefficients;
    double q = 0;
};

/// Textual entries score the fixed achievable-compression constant; encoded
/// entries score their measured shrinkage.
inline constexpr double kTextualReduction = 0.75;

/// count(sensitive=false) / count(all). Throws EmptyEntry.
double nonsensitivity(const std::vector<Term>& terms);

/// count(semantic=true) / count(all). Throws EmptyEntry.
double semantic_fraction(const std::vector<Term>& terms);

/// Raw and anonymized states return kTextualReduction; the encoded state
/// returns 1 - current/original, clamped to [0,1].
double reduction(EntryState state, std::size_t original_length, std::size_t current_length);

QualityScore score(int usefulness, double n_value, double s_value, double r_value,
                   Coefficients coefficients);

}  // namespace logcleanse
