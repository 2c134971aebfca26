#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace markoff {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI when serializing failures.
class error : public std::runtime_error {
public:
    error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define MARKOFF_DEFINE_ERROR(name, tag)                                        \
    class name : public error {                                                \
    public:                                                                    \
        explicit name(const std::string& what) : error(tag, what) {}           \
    }

MARKOFF_DEFINE_ERROR(division_by_zero, "division-by-zero");
MARKOFF_DEFINE_ERROR(parse_error, "parse-error");
MARKOFF_DEFINE_ERROR(singular_matrix, "singular-matrix");
MARKOFF_DEFINE_ERROR(not_nilpotent, "not-nilpotent");
MARKOFF_DEFINE_ERROR(invalid_triple, "invalid-triple");
MARKOFF_DEFINE_ERROR(invalid_classical_triple, "invalid-classical-triple");
MARKOFF_DEFINE_ERROR(invalid_path, "invalid-path");
MARKOFF_DEFINE_ERROR(root_has_no_parent, "root-has-no-parent");
MARKOFF_DEFINE_ERROR(invalid_mt_matrix, "invalid-mt-matrix");
MARKOFF_DEFINE_ERROR(non_unimodular, "non-unimodular");
MARKOFF_DEFINE_ERROR(inconsistent_decomposition, "inconsistent-decomposition");
MARKOFF_DEFINE_ERROR(degenerate_arrangement, "degenerate-arrangement");
MARKOFF_DEFINE_ERROR(mismatched_dominant, "mismatched-dominant");
MARKOFF_DEFINE_ERROR(excluded_root, "excluded-root");
MARKOFF_DEFINE_ERROR(not_an_isomorph, "not-an-isomorph");
MARKOFF_DEFINE_ERROR(precondition_failed, "precondition-failed");
MARKOFF_DEFINE_ERROR(not_found, "not-found");
MARKOFF_DEFINE_ERROR(lemma_violation, "lemma-violation");
MARKOFF_DEFINE_ERROR(internal_inconsistency, "internal-inconsistency");
MARKOFF_DEFINE_ERROR(non_integral_parameter, "non-integral-parameter");
MARKOFF_DEFINE_ERROR(parity_error, "parity-error");

#undef MARKOFF_DEFINE_ERROR

} // namespace markoff
