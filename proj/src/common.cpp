#include "circle/common.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace circle {

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

namespace {

GLRule build_gl(int n) {
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

}  // namespace

const GLRule& gauss_legendre(int order) {
    static std::map<int, GLRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_gl(order)).first;
    return it->second;
}

HaltonSampler::HaltonSampler(int dim, std::uint64_t seed) : dim_(dim) {
    static const int primes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                   23, 29, 31, 37, 41, 43, 47, 53};
    if (dim < 1 || dim > 16)
        throw input_error("HaltonSampler: dimension must be in [1,16]");
    base_.assign(primes, primes + dim);
    shift_.resize(dim);
    auto rng = seeded_rng(seed, 0x48414c54ULL);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int j = 0; j < dim; ++j) shift_[j] = u(rng);
}

void HaltonSampler::point(std::uint64_t idx, std::vector<double>& out) const {
    out.resize(dim_);
    for (int j = 0; j < dim_; ++j) {
        double f = 1.0, v = 0.0;
        std::uint64_t i = idx + 1;  // skip the origin
        while (i > 0) {
            f /= base_[j];
            v += f * static_cast<double>(i % base_[j]);
            i /= base_[j];
        }
        v += shift_[j];
        out[j] = v - std::floor(v);
    }
}

long long ipow_ll(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        if (b != 0 && std::abs(r) > (1LL << 62) / std::abs(b))
            throw input_error("integer power overflow");
        r *= b;
    }
    return r;
}

}  // namespace circle
