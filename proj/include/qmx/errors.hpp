#pragma once

#include <stdexcept>
#include <string>

namespace qmx {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct division_by_zero : error {
    division_by_zero() : error("division by zero in Q(q)") {}
};

struct presentation_mismatch : error {
    presentation_mismatch() : error("operands belong to different presentations") {}
};

struct bad_index_set : error {
    explicit bad_index_set(const std::string& what) : error("bad index set: " + what) {}
};

struct zero_element : error {
    explicit zero_element(const std::string& what) : error("zero element: " + what) {}
};

struct commutation_failure : error {
    explicit commutation_failure(const std::string& what) : error("commutation failure: " + what) {}
};

struct matrix_mismatch : error {
    matrix_mismatch() : error("operands belong to different exponent matrices") {}
    explicit matrix_mismatch(const std::string& what) : error("matrix mismatch: " + what) {}
};

struct cutoff_mismatch : error {
    cutoff_mismatch() : error("truncated series have different cutoffs or gradings") {}
};

struct not_positively_graded : error {
    explicit not_positively_graded(const std::string& what) : error("not positively graded: " + what) {}
};

struct consistency_violation : error {
    explicit consistency_violation(const std::string& what) : error("inconsistent automorphism data: " + what) {}
};

struct not_central : error {
    explicit not_central(const std::string& what) : error("not central: " + what) {}
};

struct degree_budget_exceeded : error {
    explicit degree_budget_exceeded(const std::string& what) : error("degree budget exceeded: " + what) {}
};

struct index_out_of_scope : error {
    explicit index_out_of_scope(const std::string& what) : error("index out of scope: " + what) {}
};

struct nilpotency_bound_exceeded : error {
    explicit nilpotency_bound_exceeded(const std::string& what)
        : error("nilpotency bound exceeded: " + what) {}
};

struct stage_shape_violation : error {
    explicit stage_shape_violation(const std::string& what) : error("stage shape violation: " + what) {}
};

} // namespace qmx
