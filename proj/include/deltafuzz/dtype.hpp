#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace deltafuzz {

enum class DType { F16, F32, F64, I32, I64, Bool };

inline constexpr DType kAllDTypes[] = {DType::F16, DType::F32, DType::F64,
                                       DType::I32, DType::I64, DType::Bool};

bool is_float_dtype(DType d);
bool is_int_dtype(DType d);

const char* dtype_name(DType d);                       // "f16", "i32", ...
std::optional<DType> dtype_from_name(const std::string& s);

// Join on the numeric promotion lattice: I32 < I64 < F16 < F32 < F64.
// Bool promotes only with Bool; mixing Bool with a numeric dtype throws
// PromotionError.
DType promote(DType a, DType b);

// Representative extreme values. min/max are the lowest/highest finite
// values of the dtype (Bool: 0/1). nan only exists for float dtypes.
double dtype_max(DType d);
double dtype_min(DType d);

// Round a double to the precision of the given float dtype. F64 is the
// identity, F32 goes through the native float type, F16 rounds directly to
// IEEE-754 binary16 (round-to-nearest-even) without an intermediate float
// step so no double rounding can occur. Overflowing magnitudes become
// +/-inf, e.g. 65520.0 -> inf for F16.
double round_to_float_dtype(double v, DType d);
double round_f16(double v);

// Wrapping two's-complement conversions used by integer arithmetic.
int64_t wrap_to_int_dtype(int64_t v, DType d);

// Convert an arbitrary double to an integer payload value: truncate toward
// zero, then wrap modulo 2^64 / 2^32. NaN and infinities throw TrapError
// ("unrepresentable cast").
int64_t double_to_int_wrapped(double v, DType d);

}  // namespace deltafuzz
