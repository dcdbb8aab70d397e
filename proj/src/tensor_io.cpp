#include "longdiff/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "longdiff/error.hpp"
#include "longdiff/random.hpp"

namespace longdiff {
namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    static_assert(std::is_unsigned_v<T>);
    for (std::size_t b = 0; b < sizeof(T); ++b) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
    }
}

template <typename T>
T get_le(const std::uint8_t* p) {
    T value = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) value |= static_cast<T>(p[b]) << (8 * b);
    return value;
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
    t.validate();
    require(t.rank() <= std::numeric_limits<std::uint32_t>::max(), "tensor rank too large");
    std::vector<std::uint8_t> out;
    out.reserve(8 + 8 * t.rank() + 8 * t.size());
    out.insert(out.end(), std::begin(kTensorMagic), std::end(kTensorMagic));
    put_le(out, static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.dims) put_le(out, static_cast<std::uint64_t>(d));
    for (double v : t.data) put_le(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

Tensor decode_tensor(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kTensorMagic, 4) != 0) {
        fail(ErrorCode::BadMagic, "not an LDT1 tensor (bad magic)");
    }
    if (bytes.size() < 8) fail(ErrorCode::Truncated, "LDT1 header truncated before ndim");
    const auto ndim = get_le<std::uint32_t>(bytes.data() + 4);
    std::size_t offset = 8;
    if ((bytes.size() - offset) / 8 < ndim) {
        fail(ErrorCode::Truncated, "LDT1 header truncated inside dims");
    }

    std::vector<std::size_t> dims(ndim);
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < ndim; ++i) {
        const auto d = get_le<std::uint64_t>(bytes.data() + offset);
        offset += 8;
        if (d != 0 && count > std::numeric_limits<std::uint64_t>::max() / 8 / d) {
            fail(ErrorCode::CorruptFile, "LDT1 extents overflow");
        }
        count *= d;
        dims[i] = static_cast<std::size_t>(d);
    }

    const std::size_t remaining = bytes.size() - offset;
    if (remaining < count * 8) {
        fail(ErrorCode::Truncated, "LDT1 payload shorter than product(dims) * 8");
    }
    if (remaining > count * 8) {
        fail(ErrorCode::CorruptFile, "LDT1 payload has trailing bytes");
    }

    std::vector<double> data(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        data[i] = std::bit_cast<double>(get_le<std::uint64_t>(bytes.data() + offset + 8 * i));
    }
    return Tensor(std::move(dims), std::move(data));  // validates finiteness
}

void write_tensor(const Tensor& t, const std::filesystem::path& path) {
    const auto bytes = encode_tensor(t);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) fail(ErrorCode::Io, "failed reading " + path.string());
    return decode_tensor(bytes);
}

Tensor synth_features(std::size_t frames, std::size_t channels, std::size_t spatial,
                      std::uint64_t seed) {
    require(frames >= 1 && channels >= 1 && spatial >= 1,
            "synth_features requires N, C, hw >= 1");
    const CounterRng rng(seed);
    Tensor t({frames, channels, spatial});
    for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = rng.normal(i);
    return t;
}

Matrix synth_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double scale) {
    const CounterRng rng(seed);
    Matrix m(rows, cols);
    auto& d = m.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = scale * rng.normal(i);
    return m;
}

}  // namespace longdiff
