#include "deltafuzz/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "deltafuzz/errors.hpp"

namespace deltafuzz {

namespace {
constexpr int64_t kMaxElements = 1 << 24;
}

int64_t Shape::element_count() const {
    int64_t n = 1;
    for (int64_t d : dims) n *= d;
    return n;
}

std::string Shape::to_string() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < dims.size(); ++i) {
        if (i) os << ',';
        os << dims[i];
    }
    os << ']';
    return os.str();
}

void Shape::check_valid() const {
    if (rank() > 4) {
        throw ShapeError("rank " + std::to_string(rank()) + " exceeds the engine maximum of 4");
    }
    int64_t n = 1;
    for (int64_t d : dims) {
        if (d < 0) throw ShapeError("negative extent in " + to_string());
        if (d > kMaxElements) throw ShapeError("extent too large in " + to_string());
        n *= d;
        if (n > kMaxElements) throw ShapeError("element count too large for " + to_string());
    }
}

StructureKind structure_kind(const Structure& s) {
    if (std::holds_alternative<DenseStructure>(s)) return StructureKind::Dense;
    if (std::holds_alternative<SparseStructure>(s)) return StructureKind::Sparse;
    return StructureKind::Ragged;
}

const char* structure_kind_name(StructureKind k) {
    switch (k) {
        case StructureKind::Dense: return "dense";
        case StructureKind::Sparse: return "sparse";
        case StructureKind::Ragged: return "ragged";
    }
    return "?";
}

bool stored_is_zero(double v) {
    return std::bit_cast<uint64_t>(v) == 0;
}

namespace {

double convert_float_in(double v, DType d) { return round_to_float_dtype(v, d); }

int64_t convert_int_in(double v, DType d) { return double_to_int_wrapped(v, d); }

int64_t linear_index(const std::vector<int64_t>& coord, const Shape& shape) {
    int64_t idx = 0;
    for (size_t i = 0; i < coord.size(); ++i) {
        idx = idx * shape.dims[i] + coord[i];
    }
    return idx;
}

}  // namespace

int64_t TensorValue::stored_count() const {
    return is_float() ? int64_t(fdata_.size()) : int64_t(idata_.size());
}

double TensorValue::fat(int64_t i) const {
    return is_float() ? fdata_[size_t(i)] : double(idata_[size_t(i)]);
}

int64_t TensorValue::iat(int64_t i) const {
    if (is_float()) return double_to_int_wrapped(fdata_[size_t(i)], DType::I64);
    return idata_[size_t(i)];
}

const std::vector<double>& TensorValue::float_payload() const { return fdata_; }
const std::vector<int64_t>& TensorValue::int_payload() const { return idata_; }

TensorValue TensorValue::dense(DType dtype, Shape shape, const std::vector<double>& values) {
    shape.check_valid();
    if (int64_t(values.size()) != shape.element_count()) {
        throw StructureError("dense payload length " + std::to_string(values.size()) +
                             " does not match element count " +
                             std::to_string(shape.element_count()) + " of " + shape.to_string());
    }
    TensorValue t;
    t.dtype_ = dtype;
    t.shape_ = std::move(shape);
    t.structure_ = DenseStructure{};
    if (is_float_dtype(dtype)) {
        t.fdata_.reserve(values.size());
        for (double v : values) t.fdata_.push_back(convert_float_in(v, dtype));
    } else {
        t.idata_.reserve(values.size());
        for (double v : values) t.idata_.push_back(convert_int_in(v, dtype));
    }
    return t;
}

TensorValue TensorValue::dense_from_ints(DType dtype, Shape shape,
                                         const std::vector<int64_t>& values) {
    shape.check_valid();
    if (int64_t(values.size()) != shape.element_count()) {
        throw StructureError("dense payload length does not match element count of " +
                             shape.to_string());
    }
    TensorValue t;
    t.dtype_ = dtype;
    t.shape_ = std::move(shape);
    t.structure_ = DenseStructure{};
    if (is_float_dtype(dtype)) {
        for (int64_t v : values) t.fdata_.push_back(convert_float_in(double(v), dtype));
    } else {
        for (int64_t v : values) t.idata_.push_back(wrap_to_int_dtype(v, dtype));
    }
    return t;
}

TensorValue TensorValue::scalar(DType dtype, double value) {
    return dense(dtype, Shape{}, {value});
}

namespace {

void check_sparse_coords(const std::vector<std::vector<int64_t>>& coords, const Shape& shape,
                         size_t value_count) {
    if (coords.size() != value_count) {
        throw StructureError("sparse coords/values length mismatch");
    }
    for (size_t i = 0; i < coords.size(); ++i) {
        const auto& c = coords[i];
        if (int(c.size()) != shape.rank()) {
            throw StructureError("sparse coordinate rank mismatch for " + shape.to_string());
        }
        for (size_t k = 0; k < c.size(); ++k) {
            if (c[k] < 0 || c[k] >= shape.dims[k]) {
                throw StructureError("sparse coordinate out of bounds for " + shape.to_string());
            }
        }
        if (i > 0 && !(coords[i - 1] < c)) {
            throw StructureError("sparse coordinates must be strictly sorted and unique");
        }
    }
}

}  // namespace

TensorValue TensorValue::sparse(DType dtype, Shape shape,
                                std::vector<std::vector<int64_t>> coords,
                                const std::vector<double>& values) {
    shape.check_valid();
    check_sparse_coords(coords, shape, values.size());
    TensorValue t;
    t.dtype_ = dtype;
    t.shape_ = std::move(shape);
    if (is_float_dtype(dtype)) {
        for (double v : values) {
            double c = convert_float_in(v, dtype);
            if (stored_is_zero(c)) throw StructureError("sparse stores nonzero values only");
            t.fdata_.push_back(c);
        }
    } else {
        for (double v : values) {
            int64_t c = convert_int_in(v, dtype);
            if (c == 0) throw StructureError("sparse stores nonzero values only");
            t.idata_.push_back(c);
        }
    }
    t.structure_ = SparseStructure{std::move(coords)};
    return t;
}

TensorValue TensorValue::sparse_from_ints(DType dtype, Shape shape,
                                          std::vector<std::vector<int64_t>> coords,
                                          const std::vector<int64_t>& values) {
    shape.check_valid();
    check_sparse_coords(coords, shape, values.size());
    TensorValue t;
    t.dtype_ = dtype;
    t.shape_ = std::move(shape);
    if (is_float_dtype(dtype)) {
        for (int64_t v : values) {
            double c = convert_float_in(double(v), dtype);
            if (stored_is_zero(c)) throw StructureError("sparse stores nonzero values only");
            t.fdata_.push_back(c);
        }
    } else {
        for (int64_t v : values) {
            int64_t c = wrap_to_int_dtype(v, dtype);
            if (c == 0) throw StructureError("sparse stores nonzero values only");
            t.idata_.push_back(c);
        }
    }
    t.structure_ = SparseStructure{std::move(coords)};
    return t;
}

TensorValue TensorValue::ragged(DType dtype, Shape shape, std::vector<int64_t> row_lengths,
                                const std::vector<double>& values) {
    shape.check_valid();
    if (shape.rank() != 2) {
        throw StructureError("ragged structure applies only to rank-2 data, got " +
                             shape.to_string());
    }
    if (int64_t(row_lengths.size()) != shape.dims[0]) {
        throw StructureError("ragged row count does not match " + shape.to_string());
    }
    int64_t total = 0;
    for (int64_t len : row_lengths) {
        if (len != shape.dims[1]) {
            throw StructureError("ragged rows must all have length " +
                                 std::to_string(shape.dims[1]) + " for " + shape.to_string());
        }
        total += len;
    }
    if (int64_t(values.size()) != total) {
        throw StructureError("ragged flat value count does not match sum of row lengths");
    }
    TensorValue t;
    t.dtype_ = dtype;
    t.shape_ = std::move(shape);
    if (is_float_dtype(dtype)) {
        for (double v : values) t.fdata_.push_back(convert_float_in(v, dtype));
    } else {
        for (double v : values) t.idata_.push_back(convert_int_in(v, dtype));
    }
    t.structure_ = RaggedStructure{std::move(row_lengths)};
    return t;
}

TensorValue TensorValue::ragged_from_ints(DType dtype, Shape shape,
                                          std::vector<int64_t> row_lengths,
                                          const std::vector<int64_t>& values) {
    std::vector<double> as_doubles(values.begin(), values.end());
    if (is_float_dtype(dtype)) return ragged(dtype, std::move(shape), std::move(row_lengths), as_doubles);
    TensorValue t = ragged(dtype, std::move(shape), std::move(row_lengths),
                           std::vector<double>(values.size(), 0.0));
    for (size_t i = 0; i < values.size(); ++i) t.idata_[i] = wrap_to_int_dtype(values[i], dtype);
    return t;
}

std::vector<double> TensorValue::logical_doubles() const {
    if (kind() != StructureKind::Sparse) {
        std::vector<double> out;
        out.reserve(size_t(stored_count()));
        for (int64_t i = 0; i < stored_count(); ++i) out.push_back(fat(i));
        return out;
    }
    std::vector<double> out(size_t(shape_.element_count()), 0.0);
    const auto& sp = std::get<SparseStructure>(structure_);
    for (size_t i = 0; i < sp.coords.size(); ++i) {
        out[size_t(linear_index(sp.coords[i], shape_))] = fat(int64_t(i));
    }
    return out;
}

std::vector<int64_t> TensorValue::logical_ints() const {
    if (kind() != StructureKind::Sparse) {
        std::vector<int64_t> out;
        out.reserve(size_t(stored_count()));
        for (int64_t i = 0; i < stored_count(); ++i) out.push_back(iat(i));
        return out;
    }
    std::vector<int64_t> out(size_t(shape_.element_count()), 0);
    const auto& sp = std::get<SparseStructure>(structure_);
    for (size_t i = 0; i < sp.coords.size(); ++i) {
        out[size_t(linear_index(sp.coords[i], shape_))] = iat(int64_t(i));
    }
    return out;
}

TensorValue TensorValue::densify() const {
    if (kind() == StructureKind::Dense && !is_float()) {
        return dense_from_ints(dtype_, shape_, idata_);
    }
    if (is_float()) return dense(dtype_, shape_, logical_doubles());
    return dense_from_ints(dtype_, shape_, logical_ints());
}

bool TensorValue::equals_bitwise(const TensorValue& o) const {
    if (dtype_ != o.dtype_ || !(shape_ == o.shape_)) return false;
    if (kind() != o.kind()) return false;
    if (kind() == StructureKind::Sparse &&
        std::get<SparseStructure>(structure_).coords != std::get<SparseStructure>(o.structure_).coords)
        return false;
    if (kind() == StructureKind::Ragged &&
        std::get<RaggedStructure>(structure_).row_lengths !=
            std::get<RaggedStructure>(o.structure_).row_lengths)
        return false;
    if (is_float()) {
        if (fdata_.size() != o.fdata_.size()) return false;
        for (size_t i = 0; i < fdata_.size(); ++i) {
            if (std::bit_cast<uint64_t>(fdata_[i]) != std::bit_cast<uint64_t>(o.fdata_[i]))
                return false;
        }
        return true;
    }
    return idata_ == o.idata_;
}

TensorValue convert_structure(const TensorValue& t, StructureKind target) {
    if (target == StructureKind::Dense) return t.densify();
    if (target == StructureKind::Sparse) {
        std::vector<std::vector<int64_t>> coords;
        std::vector<double> values;
        const Shape& shape = t.shape();
        std::vector<int64_t> coord(size_t(shape.rank()), 0);
        if (t.is_float()) {
            auto logical = t.logical_doubles();
            for (size_t i = 0; i < logical.size(); ++i) {
                if (!stored_is_zero(logical[i])) {
                    coords.push_back(coord);
                    values.push_back(logical[i]);
                }
                for (int k = shape.rank() - 1; k >= 0; --k) {
                    if (++coord[size_t(k)] < shape.dims[size_t(k)]) break;
                    coord[size_t(k)] = 0;
                }
            }
            return TensorValue::sparse(t.dtype(), shape, std::move(coords), values);
        }
        auto logical = t.logical_ints();
        std::vector<int64_t> ivalues;
        for (size_t i = 0; i < logical.size(); ++i) {
            if (logical[i] != 0) {
                coords.push_back(coord);
                ivalues.push_back(logical[i]);
            }
            for (int k = shape.rank() - 1; k >= 0; --k) {
                if (++coord[size_t(k)] < shape.dims[size_t(k)]) break;
                coord[size_t(k)] = 0;
            }
        }
        return TensorValue::sparse_from_ints(t.dtype(), shape, std::move(coords), ivalues);
    }
    // Ragged
    if (t.shape().rank() != 2) {
        throw StructureError("ragged conversion requires rank-2, got " + t.shape().to_string());
    }
    std::vector<int64_t> row_lengths(size_t(t.shape().dims[0]), t.shape().dims[1]);
    if (t.is_float()) {
        return TensorValue::ragged(t.dtype(), t.shape(), std::move(row_lengths),
                                   t.logical_doubles());
    }
    return TensorValue::ragged_from_ints(t.dtype(), t.shape(), std::move(row_lengths),
                                         t.logical_ints());
}

TensorValue cast(const TensorValue& t, DType target) {
    if (target == t.dtype()) return t;

    auto convert_one = [&](int64_t i) -> double {
        if (t.is_float()) {
            double v = t.float_payload()[size_t(i)];
            if (is_float_dtype(target)) return round_to_float_dtype(v, target);
            return double(double_to_int_wrapped(v, target));
        }
        int64_t v = t.int_payload()[size_t(i)];
        if (is_float_dtype(target)) return round_to_float_dtype(double(v), target);
        return double(wrap_to_int_dtype(v, target));
    };

    // int->int and int targets use the exact integer path to avoid the
    // double round trip on large values.
    switch (t.kind()) {
        case StructureKind::Dense: {
            if (is_int_dtype(target) && !t.is_float()) {
                std::vector<int64_t> out;
                for (int64_t v : t.int_payload()) out.push_back(wrap_to_int_dtype(v, target));
                return TensorValue::dense_from_ints(target, t.shape(), out);
            }
            std::vector<double> out;
            for (int64_t i = 0; i < t.stored_count(); ++i) out.push_back(convert_one(i));
            if (is_int_dtype(target)) {
                std::vector<int64_t> iv(out.size());
                for (size_t i = 0; i < out.size(); ++i) iv[i] = int64_t(out[i]);
                return TensorValue::dense_from_ints(target, t.shape(), iv);
            }
            return TensorValue::dense(target, t.shape(), out);
        }
        case StructureKind::Sparse: {
            // converting can zero out stored values (e.g. 0.4 -> i32 0), so
            // rebuild the sparse set from the converted logical payload
            TensorValue dense = cast(t.densify(), target);
            return convert_structure(dense, StructureKind::Sparse);
        }
        case StructureKind::Ragged: {
            TensorValue dense = cast(t.densify(), target);
            return convert_structure(dense, StructureKind::Ragged);
        }
    }
    throw StructureError("unreachable cast");
}

}  // namespace deltafuzz
