#include <cmath>

#include "doctest.h"
#include "weylscat/specfun.hpp"

using namespace weylscat::specfun;

namespace {

// Reference values from an arbitrary-precision library, rounded to 17 digits.
void check_close(double got, double want, double rel) {
    CHECK(std::abs(got - want) <= rel * std::abs(want));
}

void check_close(cd got, cd want, double rel) { CHECK(std::abs(got - want) <= rel * std::abs(want)); }

}  // namespace

TEST_CASE("Bessel J and Y reference values") {
    check_close(bessel_j(0, 1.0), 0.7651976865579666, 1e-14);
    check_close(bessel_y(0, 1.0), 0.08825696421567696, 1e-13);
    check_close(bessel_j(5, 10.0), -0.23406152818679364, 1e-13);
    check_close(bessel_y(5, 10.0), 0.1354030476893623, 1e-13);
    check_close(bessel_j(40, 30.0), 0.00036120236088965853, 1e-12);
    check_close(bessel_y(3, 0.1), -5099.332378612904, 1e-13);
    check_close(bessel_j_prime(1, 2.5), -0.24722141745390761, 1e-13);
}

TEST_CASE("modified Bessel K reference values across the evaluation regimes") {
    check_close(mod_bessel_k(0, 1.0), cd(0.4210244382407084, 0.0), 1e-14);
    check_close(mod_bessel_k(0, cd(3, 4)), cd(-0.007239051213570155, 0.026510418350267677), 1e-12);
    check_close(mod_bessel_k(1, cd(3, 4)), cd(-0.0056734204013233075, 0.028666936579007819), 1e-12);
    check_close(mod_bessel_k(0, 25.0), cd(3.4641615622131144e-12, 0.0), 1e-12);
    check_close(mod_bessel_k(1, 25.0), cd(3.5327780731999338e-12, 0.0), 1e-12);
    check_close(mod_bessel_k(0, cd(0.5, -1.5)), cd(-0.27722124115488758, 0.51404359588249933), 1e-13);
    check_close(mod_bessel_k(1, cd(0.5, -1.5)), cd(-0.44837170613789042, 0.50129754936581308), 1e-13);
    check_close(mod_bessel_k(0, cd(10, -10)), cd(-8.5995322049402432e-6, -1.2334791571650979e-5), 1e-12);
    check_close(mod_bessel_k(1, cd(10, -10)), cd(-8.5132483984864228e-6, -1.285270896727941e-5), 1e-12);
}

TEST_CASE("K is continuous across the regime seams") {
    for (double seam : {2.0, 20.0}) {
        for (double arg : {0.0, 0.7, -1.2, 1.5}) {
            const cd dir = std::polar(1.0, arg);
            for (int order : {0, 1}) {
                const cd a = mod_bessel_k(order, (seam - 1e-9) * dir);
                const cd b = mod_bessel_k(order, (seam + 1e-9) * dir);
                CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
            }
        }
    }
}

TEST_CASE("green kernel values on both sides of the cut") {
    check_close(green_kernel(LimitBranch{1.0, Branch::Minus}, 1.0), cd(-0.022064241, 0.191299422), 1e-8);
    check_close(green_kernel(LimitBranch{3.0, Branch::Minus}, 0.5),
                cd(-0.095612230949439711, 0.12795691793397953), 1e-13);
    check_close(green_kernel(OffAxis{1.0}, 1.0), cd(0.067008120508497137, 0.0), 1e-14);
    check_close(green_kernel(OffAxis{cd(-4, 1)}, 0.7), cd(-0.064599849377035559, -0.12048581668576148), 1e-13);
}

TEST_CASE("Plus branch is the conjugate of Minus") {
    for (double r : {0.01, 0.5, 3.0, 40.0}) {
        const cd m = green_kernel(LimitBranch{2.0, Branch::Minus}, r);
        const cd p = green_kernel(LimitBranch{2.0, Branch::Plus}, r);
        CHECK(std::abs(p - std::conj(m)) == 0.0);
    }
}

TEST_CASE("negative orders follow the reflection rule") {
    for (double x : {0.3, 4.0, 17.0}) {
        for (int n : {1, 2, 7}) {
            const double sign = n % 2 ? -1.0 : 1.0;
            CHECK(bessel_j(-n, x) == doctest::Approx(sign * bessel_j(n, x)).epsilon(1e-15));
            CHECK(bessel_y(-n, x) == doctest::Approx(sign * bessel_y(n, x)).epsilon(1e-15));
        }
    }
}

TEST_CASE("Wronskian over the supported range") {
    std::vector<double> J;
    std::vector<double> Y;
    for (double x = 0.1; x <= 100.0; x *= 1.07) {
        bessel_jy(41, x, J, Y);
        for (int n = 0; n <= 40; ++n) {
            const double w = J[n + 1] * Y[n] - J[n] * Y[n + 1];
            CHECK(std::abs(w * kPi * x / 2.0 - 1.0) <= 1e-11);
        }
    }
}

TEST_CASE("kernel parts reassemble the kernel") {
    for (const SpectralParameter s : {SpectralParameter{OffAxis{2.0}}, SpectralParameter{LimitBranch{3.0, Branch::Minus}}}) {
        for (double r : {1e-3, 0.2, 1.3}) {
            const auto p = kernel_parts(s, r);
            check_close(p.g, green_kernel(s, r), 1e-14);
            const double h = 1e-6 * r;
            const cd fd = (green_kernel(s, r + h) - green_kernel(s, r - h)) / (2.0 * h);
            check_close(p.dg, fd, 1e-6);
        }
        // Subtracting the log part leaves the documented constant at r -> 0.
        const double r = 1e-7;
        const auto p = kernel_parts(s, r);
        CHECK(std::abs(p.g - p.a0 * std::log(r) - green_log_constant(s)) <= 1e-10);
    }
}

TEST_CASE("invalid spectral parameters are rejected") {
    CHECK_THROWS_AS(validate(OffAxis{cd(-1.0, 0.0)}), DomainError);
    CHECK_THROWS_AS(validate(LimitBranch{0.0, Branch::Minus}), DomainError);
    CHECK_THROWS_AS(green_kernel(OffAxis{1.0}, 0.0), DomainError);
    CHECK_THROWS_AS(green_kernel(OffAxis{1.0}, -2.0), DomainError);
    CHECK_NOTHROW(validate(OffAxis{cd(-1.0, 1e-9)}));
}
