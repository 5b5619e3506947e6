#include <gtest/gtest.h>

#include <cmath>

#include "qfriction/constants.hpp"
#include "qfriction/errors.hpp"
#include "qfriction/kinematics.hpp"

using namespace qfriction;
using constants::pi;

namespace {

MotionState state(double v, double theta, double z0, double t = 0.0) {
    MotionState s;
    s.speed = v;
    s.angle = theta;
    s.initial_height = z0;
    s.time = t;
    return s;
}

}  // namespace

TEST(Height, AtRestStaysAtInitialHeight) {
    EXPECT_EQ(kinematics::height(state(0.0, pi, 7e-9, 1e-6)), 7e-9);
}

TEST(Height, ParallelMotionKeepsHeight) {
    EXPECT_EQ(kinematics::height(state(1e3, 0.5 * pi, 7e-9, 1e-6)), 7e-9);
    EXPECT_EQ(kinematics::height(state(1e3, 1.5 * pi, 7e-9, 1e-6)), 7e-9);
}

TEST(Height, ApproachArithmetic) {
    EXPECT_NEAR(kinematics::height(state(100.0, pi, 10e-9, 50e-12)), 5e-9, 1e-24);
}

TEST(Height, SurfaceContactThrows) {
    EXPECT_THROW(kinematics::height(state(100.0, pi, 10e-9, 100e-12)), SurfaceContact);
    EXPECT_THROW(kinematics::height(state(100.0, pi, 10e-9, 200e-12)), SurfaceContact);
}

TEST(MotionState, AnglesAreNotWrapped) {
    EXPECT_THROW(state(1.0, 2.0 * pi, 1e-9).validate(), DomainError);
    EXPECT_THROW(state(1.0, -0.1, 1e-9).validate(), DomainError);
    EXPECT_THROW(state(-1.0, 0.0, 1e-9).validate(), DomainError);
    EXPECT_THROW(state(1.0, 0.0, 0.0).validate(), DomainError);
    EXPECT_NO_THROW(state(1.0, 1.9 * pi, 1e-9).validate());
}

TEST(MotionState, ParallelDirectionsSnapToZeroCosine) {
    EXPECT_EQ(state(1.0, 0.5 * pi, 1e-9).cos_angle(), 0.0);
    EXPECT_EQ(state(1.0, 1.5 * pi, 1e-9).cos_angle(), 0.0);
    EXPECT_EQ(state(1.0, pi, 1e-9).sin_angle(), 0.0);
    EXPECT_TRUE(state(1.0, 0.5 * pi, 1e-9).is_parallel());
}

TEST(DopplerMarkov, Limits) {
    const double w = 2e13, v = 300.0, k = 1e8;
    EXPECT_EQ(kinematics::doppler_markov(w, 0.0, 1.0, 0.3, k), Complex(w, 0.0));
    const auto par = kinematics::doppler_markov(w, v, 0.5 * pi, 0.0, k);
    EXPECT_NEAR(par.real(), w + v * k, 1e-3);
    EXPECT_NEAR(par.imag(), 0.0, 1e-9);
    for (double phi : {0.0, 1.0, 2.5}) {
        const auto toward = kinematics::doppler_markov(w, v, pi, phi, k);
        EXPECT_NEAR(toward.real(), w, 1e-3);
        EXPECT_NEAR(toward.imag(), v * k, 1e-6);
    }
}

TEST(DopplerPert, Limits) {
    const double w = 2e13, v = 300.0, k = 1e8;
    EXPECT_EQ(kinematics::doppler_pert(w, 0.0, 1.0, 0.3, k), Complex(w, 0.0));
    const auto away = kinematics::doppler_pert(w, v, 0.0, 0.7, k);
    EXPECT_NEAR(away.real(), w, 1e-3);
    EXPECT_NEAR(away.imag(), v * k, 1e-6);
    const auto par = kinematics::doppler_pert(w, v, 0.5 * pi, pi, k);
    EXPECT_NEAR(par.real(), w + v * k, 1e-3);
    EXPECT_NEAR(par.imag(), 0.0, 1e-6);
}

TEST(Dimensionless, Values) {
    const auto at_rest = kinematics::dimensionless(state(0.0, pi, 1e-9), 1e13, 0.0, 1e9);
    EXPECT_EQ(at_rest.y, 0.0);
    EXPECT_NEAR(at_rest.s, 1.0, 1e-15);
    const auto moving = kinematics::dimensionless(state(1e3, 0.5 * pi, 1e-9), 4e12, 6e12, 1e9);
    EXPECT_NEAR(moving.y, 0.1, 1e-15);
}

TEST(Validity, SeriesGuard) {
    EXPECT_TRUE(kinematics::within_validity(state(1e3, pi, 1e-9), 1e13));
    EXPECT_FALSE(kinematics::within_validity(state(1e5, pi, 1e-9), 1e13));
}
