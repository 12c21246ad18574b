#include "deltafuzz/dtype.hpp"

#include <cfloat>
#include <cmath>
#include <limits>

#include "deltafuzz/errors.hpp"

namespace deltafuzz {

bool is_float_dtype(DType d) {
    return d == DType::F16 || d == DType::F32 || d == DType::F64;
}

bool is_int_dtype(DType d) {
    return d == DType::I32 || d == DType::I64 || d == DType::Bool;
}

const char* dtype_name(DType d) {
    switch (d) {
        case DType::F16: return "f16";
        case DType::F32: return "f32";
        case DType::F64: return "f64";
        case DType::I32: return "i32";
        case DType::I64: return "i64";
        case DType::Bool: return "bool";
    }
    return "?";
}

std::optional<DType> dtype_from_name(const std::string& s) {
    for (DType d : kAllDTypes) {
        if (s == dtype_name(d)) return d;
    }
    return std::nullopt;
}

namespace {

int promotion_rank(DType d) {
    switch (d) {
        case DType::I32: return 0;
        case DType::I64: return 1;
        case DType::F16: return 2;
        case DType::F32: return 3;
        case DType::F64: return 4;
        case DType::Bool: return -1;
    }
    return -1;
}

}  // namespace

DType promote(DType a, DType b) {
    if (a == DType::Bool && b == DType::Bool) return DType::Bool;
    if (a == DType::Bool || b == DType::Bool) {
        throw PromotionError(std::string("cannot promote ") + dtype_name(a) +
                             " with " + dtype_name(b) +
                             "; bool mixes only via explicit cast");
    }
    return promotion_rank(a) >= promotion_rank(b) ? a : b;
}

double dtype_max(DType d) {
    switch (d) {
        case DType::F16: return 65504.0;
        case DType::F32: return double(FLT_MAX);
        case DType::F64: return DBL_MAX;
        case DType::I32: return 2147483647.0;
        case DType::I64: return 9223372036854775807.0;  // 2^63-1 rounded up in double
        case DType::Bool: return 1.0;
    }
    return 0.0;
}

double dtype_min(DType d) {
    switch (d) {
        case DType::F16: return -65504.0;
        case DType::F32: return -double(FLT_MAX);
        case DType::F64: return -DBL_MAX;
        case DType::I32: return -2147483648.0;
        case DType::I64: return -9223372036854775808.0;
        case DType::Bool: return 0.0;
    }
    return 0.0;
}

double round_f16(double v) {
    if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(v)) return v;
    double a = std::fabs(v);
    double s = std::signbit(v) ? -1.0 : 1.0;
    if (a == 0.0) return v;  // keeps -0.0
    // Largest binary16 normal is 65504 = (2 - 2^-10) * 2^15; the midpoint to
    // the next power of two is 65520, which ties to even and overflows.
    if (a >= 65520.0) return s * std::numeric_limits<double>::infinity();
    double q;
    if (a < 0x1p-14) {
        // subnormal range: quantum is 2^-24
        q = std::ldexp(std::nearbyint(std::ldexp(a, 24)), -24);
    } else {
        int e = std::ilogb(a);
        q = std::ldexp(std::nearbyint(std::ldexp(a, 10 - e)), e - 10);
    }
    return s * q;
}

double round_to_float_dtype(double v, DType d) {
    switch (d) {
        case DType::F64: return v;
        case DType::F32: return double(float(v));
        case DType::F16: return round_f16(v);
        default: throw PromotionError("round_to_float_dtype on non-float dtype");
    }
}

int64_t wrap_to_int_dtype(int64_t v, DType d) {
    switch (d) {
        case DType::I64: return v;
        case DType::I32: return int64_t(int32_t(uint32_t(uint64_t(v))));
        case DType::Bool: return v != 0 ? 1 : 0;
        default: throw PromotionError("wrap_to_int_dtype on non-int dtype");
    }
}

int64_t double_to_int_wrapped(double v, DType d) {
    if (d == DType::Bool) {
        // any nonzero (including NaN) is true
        return (v == 0.0) ? 0 : 1;
    }
    if (std::isnan(v)) throw TrapError("unrepresentable cast", "NaN to integer");
    if (std::isinf(v)) throw TrapError("unrepresentable cast", "infinite to integer");
    double t = std::trunc(v);
    int64_t wide;
    if (t >= -9223372036854775808.0 && t < 9223372036854775808.0) {
        wide = int64_t(t);
    } else {
        // Reduce modulo 2^64. Doubles this large are exact multiples of big
        // powers of two, so fmod is exact.
        double m = std::fmod(t, 18446744073709551616.0);
        if (m < 0) m += 18446744073709551616.0;
        wide = int64_t(uint64_t(m));
    }
    return wrap_to_int_dtype(wide, d);
}

}  // namespace deltafuzz
