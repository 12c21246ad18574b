#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "deltafuzz/dtype.hpp"

namespace deltafuzz {

// Ordered list of non-negative extents; empty list is a scalar.
struct Shape {
    std::vector<int64_t> dims;

    int rank() const { return int(dims.size()); }
    int64_t element_count() const;
    bool operator==(const Shape& o) const { return dims == o.dims; }
    std::string to_string() const;  // "[2,3]"

    // Throws ShapeError on negative extents, rank > 4, or an element count
    // too large for this engine.
    void check_valid() const;
};

struct DenseStructure {};

// Nonzero coordinates, strictly sorted lexicographically, all in bounds.
// The tensor payload holds only the values at these coordinates.
struct SparseStructure {
    std::vector<std::vector<int64_t>> coords;
};

// Rank-2 row storage; this engine keeps the logical data rectangular, so
// every row length equals the column extent.
struct RaggedStructure {
    std::vector<int64_t> row_lengths;
};

using Structure = std::variant<DenseStructure, SparseStructure, RaggedStructure>;

enum class StructureKind { Dense, Sparse, Ragged };

StructureKind structure_kind(const Structure& s);
const char* structure_kind_name(StructureKind k);

// Immutable after construction. The payload is stored as doubles for float
// dtypes (rounded to the dtype's precision at construction) and as int64
// for integer/bool dtypes (wrapped to the dtype's width).
class TensorValue {
  public:
    // Dense constructors. Values are given as doubles and converted per the
    // dtype rules; float->int conversion traps on NaN/inf.
    static TensorValue dense(DType dtype, Shape shape, const std::vector<double>& values);
    static TensorValue dense_from_ints(DType dtype, Shape shape, const std::vector<int64_t>& values);
    static TensorValue scalar(DType dtype, double value);

    // Structured constructors; validate the structure invariants and throw
    // StructureError on violation.
    static TensorValue sparse(DType dtype, Shape shape,
                              std::vector<std::vector<int64_t>> coords,
                              const std::vector<double>& values);
    static TensorValue sparse_from_ints(DType dtype, Shape shape,
                                        std::vector<std::vector<int64_t>> coords,
                                        const std::vector<int64_t>& values);
    static TensorValue ragged(DType dtype, Shape shape, std::vector<int64_t> row_lengths,
                              const std::vector<double>& values);
    static TensorValue ragged_from_ints(DType dtype, Shape shape,
                                        std::vector<int64_t> row_lengths,
                                        const std::vector<int64_t>& values);

    DType dtype() const { return dtype_; }
    const Shape& shape() const { return shape_; }
    const Structure& structure() const { return structure_; }
    StructureKind kind() const { return structure_kind(structure_); }

    bool is_float() const { return is_float_dtype(dtype_); }
    // Number of stored payload entries (== element_count only for
    // dense/ragged; sparse stores nonzeros only).
    int64_t stored_count() const;

    double fat(int64_t i) const;     // stored entry as double
    int64_t iat(int64_t i) const;    // stored entry as int64 (float dtypes trap on NaN/inf)
    const std::vector<double>& float_payload() const;
    const std::vector<int64_t>& int_payload() const;

    // Full row-major logical payload as doubles (sparse gaps are +0.0).
    std::vector<double> logical_doubles() const;
    std::vector<int64_t> logical_ints() const;

    TensorValue densify() const;
    // Bitwise equality: dtype, dims, structure and payload bits all equal.
    // NaNs compare equal to themselves, -0.0 differs from +0.0.
    bool equals_bitwise(const TensorValue& o) const;

  private:
    TensorValue() = default;

    DType dtype_ = DType::F32;
    Shape shape_;
    Structure structure_;
    std::vector<double> fdata_;
    std::vector<int64_t> idata_;
};

// Structure conversion; logical values are identical before and after, and
// a round trip through Dense is bit-exact. Ragged targets require rank 2.
TensorValue convert_structure(const TensorValue& t, StructureKind target);

// dtype conversion; shape and structure preserved, values rounded/truncated
// to the target's representable range. Traps on NaN/inf -> integer.
TensorValue cast(const TensorValue& t, DType target);

// A stored float payload entry counts as zero only when it is bit-identical
// to +0.0, so sparsify/densify round trips stay bit-exact (-0.0 and NaN are
// kept as stored values).
bool stored_is_zero(double v);

}  // namespace deltafuzz
