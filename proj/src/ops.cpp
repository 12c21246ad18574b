#include "deltafuzz/ops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "deltafuzz/errors.hpp"

namespace deltafuzz {

const char* op_name(OpKind k) {
    switch (k) {
        case OpKind::Add: return "add";
        case OpKind::Sub: return "sub";
        case OpKind::Mul: return "mul";
        case OpKind::Div: return "div";
        case OpKind::Neg: return "neg";
        case OpKind::Sqrt: return "sqrt";
        case OpKind::Relu: return "relu";
        case OpKind::Matmul: return "matmul";
        case OpKind::Reshape: return "reshape";
        case OpKind::Transpose: return "transpose";
        case OpKind::ReduceSum: return "reduce_sum";
        case OpKind::Softmax: return "softmax";
        case OpKind::Cast: return "cast";
        case OpKind::AdadeltaUpdate: return "adadelta_update";
    }
    return "?";
}

std::optional<OpKind> op_from_name(const std::string& s) {
    for (OpKind k : kAllOpKinds) {
        if (s == op_name(k)) return k;
    }
    return std::nullopt;
}

int op_arity(OpKind k) {
    switch (k) {
        case OpKind::Add:
        case OpKind::Sub:
        case OpKind::Mul:
        case OpKind::Div:
        case OpKind::Matmul:
        case OpKind::AdadeltaUpdate:
            return 2;
        default:
            return 1;
    }
}

ParamValue ParamValue::of_int(int64_t v) {
    ParamValue p;
    p.tag = Tag::Int;
    p.i = v;
    return p;
}
ParamValue ParamValue::of_float(double v) {
    ParamValue p;
    p.tag = Tag::Float;
    p.f = v;
    return p;
}
ParamValue ParamValue::of_dtype(DType d) {
    ParamValue p;
    p.tag = Tag::Dtype;
    p.dtype = d;
    return p;
}
ParamValue ParamValue::of_dims(std::vector<int64_t> d) {
    ParamValue p;
    p.tag = Tag::Dims;
    p.dims = std::move(d);
    return p;
}

bool ParamValue::equals_bitwise(const ParamValue& o) const {
    if (tag != o.tag) return false;
    switch (tag) {
        case Tag::Int: return i == o.i;
        case Tag::Float: return std::bit_cast<uint64_t>(f) == std::bit_cast<uint64_t>(o.f);
        case Tag::Dtype: return dtype == o.dtype;
        case Tag::Dims: return dims == o.dims;
    }
    return false;
}

const ParamValue* find_param(const ParamList& params, const std::string& name) {
    for (const auto& [n, v] : params) {
        if (n == name) return &v;
    }
    return nullptr;
}

const std::vector<ParamSpec>& op_param_schema(OpKind k) {
    static const std::vector<ParamSpec> none;
    static const std::vector<ParamSpec> reshape = {{"dims", ParamValue::Tag::Dims, true}};
    static const std::vector<ParamSpec> reduce = {{"axis", ParamValue::Tag::Int, true}};
    static const std::vector<ParamSpec> cast_s = {{"to", ParamValue::Tag::Dtype, true}};
    static const std::vector<ParamSpec> adadelta = {
        {"epsilon", ParamValue::Tag::Float, true},
        {"lr", ParamValue::Tag::Float, true},
        {"rho", ParamValue::Tag::Float, true},
        {"steps", ParamValue::Tag::Int, false},
    };
    switch (k) {
        case OpKind::Reshape: return reshape;
        case OpKind::ReduceSum: return reduce;
        case OpKind::Cast: return cast_s;
        case OpKind::AdadeltaUpdate: return adadelta;
        default: return none;
    }
}

void check_params(OpKind k, const ParamList& params) {
    const auto& schema = op_param_schema(k);
    for (const auto& [name, value] : params) {
        const ParamSpec* spec = nullptr;
        for (const auto& s : schema) {
            if (s.name == name) spec = &s;
        }
        if (!spec) {
            throw ValidationError(std::string(op_name(k)) + " does not take parameter '" + name +
                                  "'");
        }
        bool ok = value.tag == spec->type ||
                  // int literals are accepted where a float is declared
                  (spec->type == ParamValue::Tag::Float && value.tag == ParamValue::Tag::Int);
        if (!ok) {
            throw ValidationError(std::string(op_name(k)) + " parameter '" + name +
                                  "' has the wrong type");
        }
    }
    for (const auto& s : schema) {
        if (s.required && !find_param(params, s.name)) {
            throw ValidationError(std::string(op_name(k)) + " requires parameter '" + s.name +
                                  "'");
        }
    }
}

namespace {

bool is_elementwise_binary(OpKind k) {
    return k == OpKind::Add || k == OpKind::Sub || k == OpKind::Mul || k == OpKind::Div ||
           k == OpKind::AdadeltaUpdate;
}

bool is_elementwise_unary(OpKind k) {
    return k == OpKind::Neg || k == OpKind::Sqrt || k == OpKind::Relu || k == OpKind::Softmax ||
           k == OpKind::Cast;
}

}  // namespace

Shape infer_shape(OpKind k, const std::vector<Shape>& in, const ParamList& params) {
    if (int(in.size()) != op_arity(k)) {
        throw ShapeError(std::string(op_name(k)) + " expects " + std::to_string(op_arity(k)) +
                         " inputs, got " + std::to_string(in.size()));
    }
    if (is_elementwise_binary(k)) {
        if (!(in[0] == in[1])) {
            throw ShapeError(std::string(op_name(k)) + " requires identical shapes, got " +
                             in[0].to_string() + " and " + in[1].to_string());
        }
        return in[0];
    }
    if (is_elementwise_unary(k)) return in[0];
    switch (k) {
        case OpKind::Matmul: {
            if (in[0].rank() != 2 || in[1].rank() != 2) {
                throw ShapeError("matmul requires rank-2 inputs, got " + in[0].to_string() +
                                 " and " + in[1].to_string());
            }
            if (in[0].dims[1] != in[1].dims[0]) {
                throw ShapeError("matmul inner extents differ: " + in[0].to_string() + " x " +
                                 in[1].to_string());
            }
            return Shape{{in[0].dims[0], in[1].dims[1]}};
        }
        case OpKind::Reshape: {
            const ParamValue* dims = find_param(params, "dims");
            if (!dims || dims->tag != ParamValue::Tag::Dims) {
                throw ValidationError("reshape requires parameter 'dims'");
            }
            Shape target{dims->dims};
            target.check_valid();
            if (target.element_count() != in[0].element_count()) {
                throw ShapeError("reshape cannot change element count: " + in[0].to_string() +
                                 " -> " + target.to_string());
            }
            return target;
        }
        case OpKind::Transpose: {
            if (in[0].rank() != 2) {
                throw ShapeError("transpose requires rank-2, got " + in[0].to_string());
            }
            return Shape{{in[0].dims[1], in[0].dims[0]}};
        }
        case OpKind::ReduceSum: {
            const ParamValue* axis = find_param(params, "axis");
            if (!axis || axis->tag != ParamValue::Tag::Int) {
                throw ValidationError("reduce_sum requires integer parameter 'axis'");
            }
            if (axis->i < 0 || axis->i >= in[0].rank()) {
                throw ShapeError("reduce_sum axis " + std::to_string(axis->i) +
                                 " out of range for " + in[0].to_string());
            }
            Shape out = in[0];
            out.dims.erase(out.dims.begin() + axis->i);
            return out;
        }
        default:
            break;
    }
    throw ShapeError(std::string("no shape rule for ") + op_name(k));
}

DType infer_dtype(OpKind k, const std::vector<DType>& in, const ParamList& params) {
    if (k == OpKind::Cast) {
        const ParamValue* to = find_param(params, "to");
        if (!to || to->tag != ParamValue::Tag::Dtype) {
            throw ValidationError("cast requires dtype parameter 'to'");
        }
        return to->dtype;
    }
    DType d = in[0];
    for (size_t i = 1; i < in.size(); ++i) d = promote(d, in[i]);
    return d;
}

namespace {

// Convert a computed double to the output dtype's payload form.
double finish_float(double v, DType d) { return round_to_float_dtype(v, d); }

std::vector<double> as_doubles(const TensorValue& t) { return t.logical_doubles(); }

std::vector<int64_t> as_ints(const TensorValue& t) {
    if (t.is_float()) {
        auto d = t.logical_doubles();
        std::vector<int64_t> out(d.size());
        for (size_t i = 0; i < d.size(); ++i) out[i] = double_to_int_wrapped(d[i], DType::I64);
        return out;
    }
    return t.logical_ints();
}

int64_t wrap_mul(int64_t a, int64_t b) {
    return int64_t(uint64_t(a) * uint64_t(b));
}
int64_t wrap_add(int64_t a, int64_t b) {
    return int64_t(uint64_t(a) + uint64_t(b));
}
int64_t wrap_sub(int64_t a, int64_t b) {
    return int64_t(uint64_t(a) - uint64_t(b));
}

int64_t int_div(int64_t a, int64_t b, CoverageSink* sink) {
    if (b == 0) {
        cov(sink, "br:op.div.int_zero");
        throw TrapError("integer division by zero", "divisor is 0");
    }
    if (a == INT64_MIN && b == -1) return INT64_MIN;  // wraps
    return a / b;
}

TensorValue from_doubles(DType d, const Shape& shape, const std::vector<double>& v) {
    if (is_float_dtype(d)) return TensorValue::dense(d, shape, v);
    std::vector<int64_t> iv(v.size());
    for (size_t i = 0; i < v.size(); ++i) iv[i] = double_to_int_wrapped(v[i], d);
    return TensorValue::dense_from_ints(d, shape, iv);
}

TensorValue eval_adadelta(const std::vector<TensorValue>& inputs, const ParamList& params,
                          DType out_dtype, const Shape& shape, CoverageSink* sink) {
    double lr = find_param(params, "lr")->as_double();
    double rho = find_param(params, "rho")->as_double();
    double eps = find_param(params, "epsilon")->as_double();
    const ParamValue* steps_p = find_param(params, "steps");
    int64_t steps = steps_p ? steps_p->i : 1;
    if (steps < 0) throw ValidationError("adadelta_update steps must be >= 0");
    if (steps > 1000000) throw ValidationError("adadelta_update steps too large");

    auto var = as_doubles(inputs[0]);
    auto grad = as_doubles(inputs[1]);
    std::vector<double> acc_g(var.size(), 0.0), acc_d(var.size(), 0.0);
    for (int64_t s = 0; s < steps; ++s) {
        cov(sink, "seg:op.adadelta_update.step");
        for (size_t i = 0; i < var.size(); ++i) {
            double g = grad[i];
            acc_g[i] = rho * acc_g[i] + (1.0 - rho) * g * g;
            double delta = -std::sqrt(acc_d[i] + eps) / std::sqrt(acc_g[i] + eps) * g;
            acc_d[i] = rho * acc_d[i] + (1.0 - rho) * delta * delta;
            var[i] = var[i] + lr * delta;
            if (is_float_dtype(out_dtype)) var[i] = finish_float(var[i], out_dtype);
        }
    }
    return from_doubles(out_dtype, shape, var);
}

}  // namespace

TensorValue eval(OpKind k, const std::vector<TensorValue>& inputs, const ParamList& params,
                 CoverageSink* sink) {
    check_params(k, params);
    std::vector<Shape> shapes;
    std::vector<DType> dtypes;
    for (const auto& t : inputs) {
        shapes.push_back(t.shape());
        dtypes.push_back(t.dtype());
        switch (t.kind()) {
            case StructureKind::Dense: cov(sink, "seg:env.input.dense"); break;
            case StructureKind::Sparse: cov(sink, "seg:env.input.sparse"); break;
            case StructureKind::Ragged: cov(sink, "seg:env.input.ragged"); break;
        }
    }
    Shape out_shape = infer_shape(k, shapes, params);
    DType out_dtype = infer_dtype(k, dtypes, params);
    std::string fn_id = std::string("fn:op.") + op_name(k);
    cov(sink, fn_id.c_str());
    if (inputs.size() >= 2 && k != OpKind::Cast) cov(sink, "fn:util.promote");
    for (const auto& t : inputs) {
        if (t.kind() != StructureKind::Dense) cov(sink, "fn:util.densify");
    }
    if (out_dtype == DType::F16) cov(sink, "fn:util.round.f16");
    if (out_dtype == DType::F32) cov(sink, "fn:util.round.f32");
    if (k == OpKind::Cast) {
        if (is_float_dtype(out_dtype)) {
            cov(sink, "br:util.cast.to_float");
        } else if (out_dtype == DType::Bool) {
            cov(sink, "br:util.cast.to_bool");
        } else {
            cov(sink, "br:util.cast.to_int");
        }
    }

    const bool float_out = is_float_dtype(out_dtype);

    auto elementwise2 = [&](auto&& ff, auto&& fi) -> TensorValue {
        if (float_out) {
            auto a = as_doubles(inputs[0]);
            auto b = as_doubles(inputs[1]);
            std::vector<double> out(a.size());
            for (size_t i = 0; i < a.size(); ++i) out[i] = finish_float(ff(a[i], b[i]), out_dtype);
            return TensorValue::dense(out_dtype, out_shape, out);
        }
        auto a = as_ints(inputs[0]);
        auto b = as_ints(inputs[1]);
        std::vector<int64_t> out(a.size());
        for (size_t i = 0; i < a.size(); ++i)
            out[i] = wrap_to_int_dtype(fi(a[i], b[i]), out_dtype);
        return TensorValue::dense_from_ints(out_dtype, out_shape, out);
    };

    switch (k) {
        case OpKind::Add:
            return elementwise2([](double a, double b) { return a + b; }, wrap_add);
        case OpKind::Sub:
            return elementwise2([](double a, double b) { return a - b; }, wrap_sub);
        case OpKind::Mul:
            return elementwise2([](double a, double b) { return a * b; }, wrap_mul);
        case OpKind::Div:
            if (float_out) {
                cov(sink, "br:op.div.float");
                return elementwise2([](double a, double b) { return a / b; }, wrap_add);
            }
            return elementwise2([](double, double) { return 0.0; },
                                [sink](int64_t a, int64_t b) { return int_div(a, b, sink); });
        case OpKind::Neg: {
            if (float_out) {
                auto a = as_doubles(inputs[0]);
                for (auto& v : a) v = finish_float(-v, out_dtype);
                return TensorValue::dense(out_dtype, out_shape, a);
            }
            auto a = as_ints(inputs[0]);
            for (auto& v : a) v = wrap_to_int_dtype(wrap_sub(0, v), out_dtype);
            return TensorValue::dense_from_ints(out_dtype, out_shape, a);
        }
        case OpKind::Sqrt: {
            auto a = as_doubles(inputs[0]);
            std::vector<double> out(a.size());
            for (size_t i = 0; i < a.size(); ++i) out[i] = std::sqrt(a[i]);
            if (float_out) {
                for (auto& v : out) v = finish_float(v, out_dtype);
                return TensorValue::dense(out_dtype, out_shape, out);
            }
            return from_doubles(out_dtype, out_shape, out);
        }
        case OpKind::Relu: {
            if (float_out) {
                auto a = as_doubles(inputs[0]);
                for (auto& v : a) {
                    if (v > 0.0) {
                        cov(sink, "br:op.relu.pos");
                    } else {
                        cov(sink, "br:op.relu.nonpos");
                        v = 0.0;
                    }
                    v = finish_float(v, out_dtype);
                }
                return TensorValue::dense(out_dtype, out_shape, a);
            }
            auto a = as_ints(inputs[0]);
            for (auto& v : a) {
                if (v > 0) {
                    cov(sink, "br:op.relu.pos");
                } else {
                    cov(sink, "br:op.relu.nonpos");
                    v = 0;
                }
            }
            return TensorValue::dense_from_ints(out_dtype, out_shape, a);
        }
        case OpKind::Matmul: {
            int64_t m = shapes[0].dims[0], kk = shapes[0].dims[1], n = shapes[1].dims[1];
            if (float_out) {
                auto a = as_doubles(inputs[0]);
                auto b = as_doubles(inputs[1]);
                std::vector<double> out(size_t(m * n), 0.0);
                for (int64_t i = 0; i < m; ++i) {
                    for (int64_t j = 0; j < n; ++j) {
                        cov(sink, "seg:op.matmul.accum");
                        double acc = 0.0;
                        for (int64_t p = 0; p < kk; ++p)
                            acc += a[size_t(i * kk + p)] * b[size_t(p * n + j)];
                        out[size_t(i * n + j)] = finish_float(acc, out_dtype);
                    }
                }
                return TensorValue::dense(out_dtype, out_shape, out);
            }
            auto a = as_ints(inputs[0]);
            auto b = as_ints(inputs[1]);
            std::vector<int64_t> out(size_t(m * n), 0);
            for (int64_t i = 0; i < m; ++i) {
                for (int64_t j = 0; j < n; ++j) {
                    cov(sink, "seg:op.matmul.accum");
                    int64_t acc = 0;
                    for (int64_t p = 0; p < kk; ++p)
                        acc = wrap_add(acc, wrap_mul(a[size_t(i * kk + p)], b[size_t(p * n + j)]));
                    out[size_t(i * n + j)] = wrap_to_int_dtype(acc, out_dtype);
                }
            }
            return TensorValue::dense_from_ints(out_dtype, out_shape, out);
        }
        case OpKind::Reshape: {
            // payload order untouched
            if (inputs[0].is_float() || is_float_dtype(out_dtype)) {
                return from_doubles(out_dtype, out_shape, as_doubles(inputs[0]));
            }
            return TensorValue::dense_from_ints(out_dtype, out_shape, as_ints(inputs[0]));
        }
        case OpKind::Transpose: {
            int64_t r = shapes[0].dims[0], c = shapes[0].dims[1];
            if (float_out) {
                auto a = as_doubles(inputs[0]);
                std::vector<double> out(a.size());
                for (int64_t i = 0; i < r; ++i)
                    for (int64_t j = 0; j < c; ++j) out[size_t(j * r + i)] = a[size_t(i * c + j)];
                return TensorValue::dense(out_dtype, out_shape, out);
            }
            auto a = as_ints(inputs[0]);
            std::vector<int64_t> out(a.size());
            for (int64_t i = 0; i < r; ++i)
                for (int64_t j = 0; j < c; ++j) out[size_t(j * r + i)] = a[size_t(i * c + j)];
            return TensorValue::dense_from_ints(out_dtype, out_shape, out);
        }
        case OpKind::ReduceSum: {
            int64_t axis = find_param(params, "axis")->i;
            const Shape& s = shapes[0];
            int64_t outer = 1, inner = 1, extent = s.dims[size_t(axis)];
            for (int64_t i = 0; i < axis; ++i) outer *= s.dims[size_t(i)];
            for (int64_t i = axis + 1; i < s.rank(); ++i) inner *= s.dims[size_t(i)];
            if (float_out) {
                auto a = as_doubles(inputs[0]);
                std::vector<double> out(size_t(outer * inner), 0.0);
                for (int64_t o = 0; o < outer; ++o)
                    for (int64_t e = 0; e < extent; ++e)
                        for (int64_t in2 = 0; in2 < inner; ++in2)
                            out[size_t(o * inner + in2)] += a[size_t((o * extent + e) * inner + in2)];
                for (auto& v : out) v = finish_float(v, out_dtype);
                return TensorValue::dense(out_dtype, out_shape, out);
            }
            auto a = as_ints(inputs[0]);
            std::vector<int64_t> out(size_t(outer * inner), 0);
            for (int64_t o = 0; o < outer; ++o)
                for (int64_t e = 0; e < extent; ++e)
                    for (int64_t in2 = 0; in2 < inner; ++in2)
                        out[size_t(o * inner + in2)] =
                            wrap_add(out[size_t(o * inner + in2)],
                                     a[size_t((o * extent + e) * inner + in2)]);
            for (auto& v : out) v = wrap_to_int_dtype(v, out_dtype);
            return TensorValue::dense_from_ints(out_dtype, out_shape, out);
        }
        case OpKind::Softmax: {
            // normalizes along the last axis; scalars normalize to 1
            auto a = as_doubles(inputs[0]);
            const Shape& s = shapes[0];
            int64_t row = s.rank() == 0 ? 1 : s.dims.back();
            if (row == 0) return from_doubles(out_dtype, out_shape, a);
            int64_t rows = int64_t(a.size()) / row;
            std::vector<double> out(a.size());
            for (int64_t r = 0; r < rows; ++r) {
                cov(sink, "seg:op.softmax.row");
                double mx = -std::numeric_limits<double>::infinity();
                for (int64_t j = 0; j < row; ++j) mx = std::max(mx, a[size_t(r * row + j)]);
                double sum = 0.0;
                for (int64_t j = 0; j < row; ++j) {
                    double e = std::exp(a[size_t(r * row + j)] - mx);
                    out[size_t(r * row + j)] = e;
                    sum += e;
                }
                for (int64_t j = 0; j < row; ++j) out[size_t(r * row + j)] /= sum;
            }
            if (is_float_dtype(out_dtype)) {
                for (auto& v : out) v = finish_float(v, out_dtype);
                return TensorValue::dense(out_dtype, out_shape, out);
            }
            return from_doubles(out_dtype, out_shape, out);
        }
        case OpKind::Cast:
            return cast(inputs[0].densify(), out_dtype);
        case OpKind::AdadeltaUpdate:
            return eval_adadelta(inputs, params, out_dtype, out_shape, sink);
        default:
            break;
    }
    throw ValidationError(std::string("no kernel for ") + op_name(k));
}

}  // namespace deltafuzz
