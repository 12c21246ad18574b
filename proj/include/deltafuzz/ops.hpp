#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "deltafuzz/coverage.hpp"
#include "deltafuzz/tensor.hpp"

namespace deltafuzz {

enum class OpKind {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Sqrt,
    Relu,
    Matmul,
    Reshape,
    Transpose,
    ReduceSum,
    Softmax,
    Cast,
    AdadeltaUpdate,
};

inline constexpr OpKind kAllOpKinds[] = {
    OpKind::Add,     OpKind::Sub,       OpKind::Mul,       OpKind::Div,
    OpKind::Neg,     OpKind::Sqrt,      OpKind::Relu,      OpKind::Matmul,
    OpKind::Reshape, OpKind::Transpose, OpKind::ReduceSum, OpKind::Softmax,
    OpKind::Cast,    OpKind::AdadeltaUpdate,
};

const char* op_name(OpKind k);  // DSL spelling: "add", "reduce_sum", ...
std::optional<OpKind> op_from_name(const std::string& s);
int op_arity(OpKind k);

// Parameter values as written in a program. Int and Float are distinct so
// canonical printing and special-value mutation can respect the declared
// parameter type.
struct ParamValue {
    enum class Tag { Int, Float, Dtype, Dims };
    Tag tag = Tag::Int;
    int64_t i = 0;
    double f = 0.0;
    DType dtype = DType::F32;
    std::vector<int64_t> dims;

    static ParamValue of_int(int64_t v);
    static ParamValue of_float(double v);
    static ParamValue of_dtype(DType d);
    static ParamValue of_dims(std::vector<int64_t> d);

    // numeric view (Int or Float); Dtype/Dims are not numeric
    bool is_numeric() const { return tag == Tag::Int || tag == Tag::Float; }
    double as_double() const { return tag == Tag::Float ? f : double(i); }
    bool equals_bitwise(const ParamValue& o) const;
};

// name -> value, kept sorted by name (the canonical order).
using ParamList = std::vector<std::pair<std::string, ParamValue>>;

const ParamValue* find_param(const ParamList& params, const std::string& name);

// Declared parameter schema per op kind.
struct ParamSpec {
    std::string name;
    ParamValue::Tag type;
    bool required;
};
const std::vector<ParamSpec>& op_param_schema(OpKind k);

// Checks presence, names and types of params against the schema.
// Throws ValidationError.
void check_params(OpKind k, const ParamList& params);

// Static shape rule for each op. Elementwise ops require identical shapes
// (this engine has no broadcasting). Throws ShapeError naming the violated
// rule.
Shape infer_shape(OpKind k, const std::vector<Shape>& input_shapes, const ParamList& params);

// Output dtype: promotion of the input dtypes, except Cast which takes its
// target parameter. Throws PromotionError.
DType infer_dtype(OpKind k, const std::vector<DType>& input_dtypes, const ParamList& params);

// Pure evaluation. Output is always dense. Float arithmetic is done in
// double and rounded to the output dtype after each op; integer arithmetic
// wraps (two's complement). Throws TrapError for integer division by zero
// and unrepresentable casts; ShapeError/PromotionError/ValidationError if
// the static rules are violated by the actual inputs.
TensorValue eval(OpKind k, const std::vector<TensorValue>& inputs, const ParamList& params,
                 CoverageSink* sink = nullptr);

}  // namespace deltafuzz
