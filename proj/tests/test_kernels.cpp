#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tricons/kernels.hpp"

using namespace tricons;

namespace {

// sizes chosen to cover the vector width and scalar tails
const std::vector<std::size_t> kSizes{0, 1, 3, 4, 5, 8, 13, 64, 257, 1024};

std::vector<double> random_array(testutil::Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-10.0, 10.0);
    return v;
}

} // namespace

TEST_CASE("scalar backend is always available and active() resolves") {
    CHECK(std::string(kernels::scalar_ops().name) == "scalar");
    const std::string active = kernels::active().name;
    CHECK((active == "scalar" || active == "avx2"));
}

TEST_CASE("select switches backends by name") {
    REQUIRE(kernels::select("scalar"));
    CHECK(std::string(kernels::active().name) == "scalar");
    CHECK_FALSE(kernels::select("sse999"));
    if (kernels::avx2_ops()) {
        REQUIRE(kernels::select("avx2"));
        CHECK(std::string(kernels::active().name) == "avx2");
    } else {
        CHECK_FALSE(kernels::select("avx2"));
    }
    kernels::select("scalar");
}

TEST_CASE("simd variants agree with the scalar reference") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (!simd) return;  // nothing to compare on this machine
    const kernels::Ops& ref = kernels::scalar_ops();

    testutil::Rng rng(2024);
    for (std::size_t n : kSizes) {
        CAPTURE(n);
        const auto x = random_array(rng, n);
        const auto y = random_array(rng, n);

        // dot: accumulation order differs, allow a small relative slack
        const double d_ref = ref.dot(x.data(), y.data(), n);
        const double d_simd = simd->dot(x.data(), y.data(), n);
        CHECK(std::abs(d_ref - d_simd) <= 1e-12 * (1.0 + std::abs(d_ref)) * static_cast<double>(n + 1));

        auto y_ref = y, y_simd = y;
        ref.axpy(1.7, x.data(), y_ref.data(), n);
        simd->axpy(1.7, x.data(), y_simd.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y_ref[i] - y_simd[i]) <= 1e-13 * (1.0 + std::abs(y_ref[i])));

        auto xr = x, yr = y, xs = x, ys = y;
        const double c = std::cos(0.7), s = std::sin(0.7);
        ref.rot(xr.data(), yr.data(), c, s, n);
        simd->rot(xs.data(), ys.data(), c, s, n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(xr[i] - xs[i]) <= 1e-13 * (1.0 + std::abs(xr[i])));
            CHECK(std::abs(yr[i] - ys[i]) <= 1e-13 * (1.0 + std::abs(yr[i])));
        }
    }
}

TEST_CASE("matvec variants agree on rectangular shapes") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (!simd) return;
    const kernels::Ops& ref = kernels::scalar_ops();

    testutil::Rng rng(7);
    for (auto [rows, cols] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {3, 5}, {11, 11}, {17, 64}, {64, 17}}) {
        const auto a = random_array(rng, rows * cols);
        const auto x = random_array(rng, cols);
        std::vector<double> y_ref(rows), y_simd(rows);
        ref.matvec(a.data(), rows, cols, x.data(), y_ref.data());
        simd->matvec(a.data(), rows, cols, x.data(), y_simd.data());
        for (std::size_t i = 0; i < rows; ++i)
            CHECK(std::abs(y_ref[i] - y_simd[i]) <= 1e-12 * (1.0 + std::abs(y_ref[i])) * static_cast<double>(cols));
    }
}
