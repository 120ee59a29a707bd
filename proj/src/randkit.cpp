#include "growth/randkit.hpp"

#include <cmath>
#include <random>
#include <string>

#include "growth/errors.hpp"

namespace growth::randkit {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kRowSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kColSalt = 0x8CB92BA72F3D8DD7ULL;

constexpr std::uint64_t zigzag(std::int64_t v) noexcept {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

double open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::uint64_t SeedSpec::key() const noexcept {
    std::uint64_t k = mix64(master_seed ^ 0x6A09E667F3BCC909ULL);
    k = mix64(k + (stream_id + 1) * kGolden);
    k = mix64(k ^ ((static_cast<std::uint64_t>(purpose_tag) + 1) * kRowSalt));
    return k;
}

Stream::Stream(std::uint64_t key) {
    std::uint64_t x = key;
    for (auto& word : s_) {
        x += kGolden;
        word = mix64(x);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Stream::below(std::uint64_t n) noexcept {
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            x = (*this)();
            m = static_cast<__uint128_t>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double sample_exponential(double rate, Stream& stream) {
    if (!(rate > 0.0)) throw ArgumentError("sample_exponential: rate must be positive");
    return -std::log(stream.uniform_open()) / rate;
}

std::int64_t sample_poisson(double mean, Stream& stream) {
    if (!(mean >= 0.0)) throw ArgumentError("sample_poisson: mean must be nonnegative");
    if (mean == 0.0) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(stream);
}

double law_mean(const WeightLaw& law) {
    if (const auto* e = std::get_if<Exponential>(&law)) return 1.0 / e->rate;
    return 1.0 / std::get<Geometric>(law).q;
}

const char* law_name(const WeightLaw& law) {
    return std::holds_alternative<Exponential>(law) ? "exp" : "geom";
}

WeightField::WeightField(SeedSpec seed, WeightLaw law, Orientation orientation)
    : seed_(seed), law_(law), orientation_(orientation), key_(seed.key()) {
    if (const auto* e = std::get_if<Exponential>(&law_)) {
        if (!(e->rate > 0.0)) throw ArgumentError("exponential weight rate must be positive");
    } else {
        const double q = std::get<Geometric>(law_).q;
        if (!(q > 0.0 && q < 1.0)) throw ArgumentError("geometric success probability must be in (0,1)");
    }
}

bool WeightField::in_domain(std::int64_t i, std::int64_t j) const noexcept {
    if (orientation_ == Orientation::Quadrant) return i >= 1 && j >= 1;
    return j < 0 && j < i;
}

double WeightField::quadrant_unchecked(std::int64_t i, std::int64_t j) const noexcept {
    std::uint64_t h = mix64(key_ + zigzag(i) * kRowSalt);
    h = mix64(h ^ (zigzag(j) * kColSalt + kGolden));
    h = mix64(h);
    const double u = open_unit(h);
    if (const auto* e = std::get_if<Exponential>(&law_)) return -std::log(u) / e->rate;
    const double q = std::get<Geometric>(law_).q;
    return 1.0 + std::floor(std::log(u) / std::log1p(-q));
}

double WeightField::at(std::int64_t i, std::int64_t j) const {
    if (!in_domain(i, j)) {
        throw DomainError("site (" + std::to_string(i) + "," + std::to_string(j) +
                          ") is outside the weight field domain");
    }
    if (orientation_ == Orientation::Quadrant) return quadrant_unchecked(i, j);
    return quadrant_unchecked(i - j, -j);
}

double site_weight(const WeightField& field, std::int64_t i, std::int64_t j) { return field.at(i, j); }

PlanarPoints sample_poisson_points(const Rect& rect, double rate, const SeedSpec& seed) {
    if (!(rate >= 0.0)) throw ArgumentError("sample_poisson_points: rate must be nonnegative");
    PlanarPoints out;
    out.rect = rect;
    const double area = rect.area();
    if (area == 0.0 || rate == 0.0) return out;
    Stream stream(seed);
    const std::int64_t count = sample_poisson(rate * area, stream);
    out.points.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
        // b - U*(b-a) with U in [0,1) lands in (a,b].
        double x = rect.b - stream.uniform() * rect.width();
        double time = rect.t - stream.uniform() * rect.height();
        if (x <= rect.a) x = std::nextafter(rect.a, rect.b);
        if (time <= rect.s) time = std::nextafter(rect.s, rect.t);
        out.points.push_back({x, time});
    }
    return out;
}

}  // namespace growth::randkit
