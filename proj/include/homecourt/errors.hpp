#pragma once

#include <stdexcept>
#include <string>

namespace homecourt {

// Base class for every error raised by the engine. Data-quality problems
// discovered during parsing are reported as values, not exceptions; these
// types cover contract violations and degenerate inputs.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public error {
public:
    using error::error;
};

// A filter or grouping selected no rows.
class empty_selection_error : public error {
public:
    using error::error;
};

// Percent-increase denominator (overall mean) is zero.
class degenerate_denominator_error : public error {
public:
    using error::error;
};

// Operation asked of a game it does not apply to (e.g. home advantage of a
// neutral-site game).
class not_applicable_error : public error {
public:
    using error::error;
};

class missing_team_error : public error {
public:
    using error::error;
};

// Standardization of a constant collection.
class degenerate_scale_error : public error {
public:
    using error::error;
};

// Matching produced an empty resample: no high-attendance game falls in any
// bin occupied by the low-attendance sample.
class empty_match_error : public error {
public:
    using error::error;
};

// Too many matching iterations were skipped for the aggregate to be trusted.
class unreliable_result_error : public error {
public:
    using error::error;
};

class unsupported_stat_error : public error {
public:
    using error::error;
};

class fold_count_error : public error {
public:
    using error::error;
};

class divergence_error : public error {
public:
    using error::error;
};

class config_error : public error {
public:
    using error::error;
};

} // namespace homecourt
