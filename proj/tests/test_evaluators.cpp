#include "gemt/evaluators.hpp"

#include "gemt/errors.hpp"
#include "gemt/mesh.hpp"
#include "gemt/seeds.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>

using namespace gemt;

TEST_CASE("frontal area of the unit cube along +x is 1") {
    const PhenotypeMesh cube = make_box({1, 1, 1});
    CHECK(projected_frontal_area(cube, kFlowAxis) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("frontal area of an icosphere approaches the disc area") {
    const PhenotypeMesh sphere = make_icosphere(1.0, 4);
    const double area = projected_frontal_area(sphere, kFlowAxis, 512);
    CHECK(std::abs(area - M_PI) / M_PI < 0.01);
    // Grid refinement converges toward the analytic disc.
    const double fine = projected_frontal_area(sphere, kFlowAxis, 4096);
    CHECK(std::abs(fine - M_PI) / M_PI < 0.005);
    CHECK(std::abs(fine - M_PI) <= std::abs(area - M_PI) + 1e-4);
}

TEST_CASE("frontal area scales quadratically under uniform scaling") {
    const PhenotypeMesh wedge = make_wedge({2, 1, 0.6});
    const double base = projected_frontal_area(wedge, kFlowAxis);
    const double doubled = projected_frontal_area(scaled(wedge, 2.0), kFlowAxis);
    CHECK(doubled / base == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("frontal area is invariant under rotation about the axis") {
    const PhenotypeMesh mesh = make_wedge({2, 1, 0.6});
    const double base = projected_frontal_area(mesh, kFlowAxis);
    Rng rng(3);
    for (int i = 0; i < 5; ++i) {
        const double angle = rng.uniform() * 2 * M_PI;
        const Eigen::Matrix3d rot =
            Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX()).toRotationMatrix();
        const double rotated_area = projected_frontal_area(rotated(mesh, rot), kFlowAxis);
        CHECK(std::abs(rotated_area - base) / base < 0.005);
    }
}

TEST_CASE("frontal area works for arbitrary axes") {
    const PhenotypeMesh cube = make_box({1, 1, 1});
    // Along the main diagonal the cube silhouette is a regular hexagon with
    // area sqrt(3).
    const double area = projected_frontal_area(cube, {1, 1, 1});
    CHECK(area == doctest::Approx(std::sqrt(3.0)).epsilon(5e-3));
}

TEST_CASE("frontal area guards its inputs") {
    const PhenotypeMesh cube = make_box({1, 1, 1});
    CHECK_THROWS_AS(projected_frontal_area(cube, {0, 0, 0}), ZeroAxis);
    PhenotypeMesh empty;
    CHECK_THROWS_AS(projected_frontal_area(empty, kFlowAxis), DegenerateMesh);
}

TEST_CASE("drag proxy matches its declared formula on analytic meshes") {
    // frontal * (1 + surface / (2 * frontal)) - 1 = frontal + surface/2 - 1.
    const PhenotypeMesh cube = make_box({1, 1, 1});
    CHECK(drag_proxy(cube, kFlowAxis) == doctest::Approx(1.0 + 3.0 - 1.0).epsilon(1e-3));

    // Same frontal area, elongated along the flow axis: more skin, more drag
    // under this friction-dominated heuristic.
    const PhenotypeMesh longbox = make_box({2, 1, 1});
    CHECK(drag_proxy(longbox, kFlowAxis) == doctest::Approx(1.0 + 5.0 - 1.0).epsilon(1e-3));
    CHECK(drag_proxy(longbox, kFlowAxis) > drag_proxy(cube, kFlowAxis));
}

TEST_CASE("lift proxy vanishes on spheres and flips sign under mirroring") {
    const PhenotypeMesh sphere = make_icosphere(1.0, 3);
    CHECK(std::abs(lift_proxy(sphere, kFlowAxis, kUpAxis)) < 1e-6);

    const PhenotypeMesh wedge = make_wedge({2, 1, 0.6});
    const double lift = lift_proxy(wedge, kFlowAxis, kUpAxis);
    CHECK(lift != 0.0);
    CHECK(lift_proxy(mirrored_z(wedge), kFlowAxis, kUpAxis) ==
          doctest::Approx(-lift).epsilon(1e-12));
}

TEST_CASE("combined cost follows Eq.-1 arithmetic") {
    CHECK(combined_cost(0.4, 0.8, 0.55) == doctest::Approx(0.29).epsilon(1e-12));
    CHECK(combined_cost(0.37, 0.9, 0.0) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(combined_cost(0.37, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(combined_cost(0.5, 0.5, -0.1), AlphaOutOfRange);
    CHECK_THROWS_AS(combined_cost(0.5, 0.5, 1.1), AlphaOutOfRange);
}

TEST_CASE("combined cost is monotone in both arguments") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = rng.uniform();
        const double phys = rng.uniform();
        const double vis = rng.uniform();
        const double cost = combined_cost(phys, vis, alpha);
        CHECK(cost == doctest::Approx((1 - alpha) * phys + alpha * (1 - vis)).epsilon(1e-12));
        CHECK(combined_cost(phys, std::min(1.0, vis + 0.1), alpha) <= cost + 1e-12);
        CHECK(combined_cost(phys + 0.1, vis, alpha) >= cost - 1e-12);
    }
}

TEST_CASE("vector combined cost mean-reduces the physical entries") {
    Eigen::VectorXd phys(2);
    phys << 0.2, 0.6;
    CHECK(combined_cost(phys, 0.8, 0.55) == doctest::Approx(combined_cost(0.4, 0.8, 0.55)));
}

TEST_CASE("constrained objectives implement the Eq.-2 feasibility law") {
    Eigen::VectorXd phys(2);
    phys << 0.2, 0.6;

    auto r = constrained_objectives(phys, 0.7, 0.5, 1.0);
    CHECK(r.feasible);
    CHECK(r.violation == 0.0);
    CHECK(r.objectives == phys);

    r = constrained_objectives(phys, 0.3, 0.5, 1.0);
    CHECK_FALSE(r.feasible);
    CHECK(r.violation == doctest::Approx(0.2).epsilon(1e-12));

    r = constrained_objectives(phys, 0.5, 0.5, 1.0);  // closed bound
    CHECK(r.feasible);

    CHECK_THROWS_AS(constrained_objectives(phys, 0.5, 0.8, 0.4), BoundsInvalid);
    CHECK_THROWS_AS(constrained_objectives(phys, 0.5, -0.1, 0.5), BoundsInvalid);
}

TEST_CASE("feasibility depends only on the visual score") {
    Eigen::VectorXd phys(2);
    phys << 0.2, 0.6;
    const auto base = constrained_objectives(phys, 0.6, 0.5, 1.0);
    const auto scaled_phys = constrained_objectives(10.0 * phys, 0.6, 0.5, 1.0);
    CHECK(base.feasible == scaled_phys.feasible);
    CHECK(base.violation == scaled_phys.violation);
}

TEST_CASE("running normalizer follows the min-max rules") {
    RunningNormalizer norm(2, 1);
    CHECK(norm.normalize(1, 0, 3.7) == 0.5);  // nothing seen yet

    norm.observe(1, 0, 10.0);
    CHECK(norm.normalize(1, 0, 10.0) == 0.5);  // degenerate range

    norm.observe(1, 0, 20.0);
    CHECK(norm.normalize(1, 0, 10.0) == doctest::Approx(0.0));
    CHECK(norm.normalize(1, 0, 20.0) == doctest::Approx(1.0));
    CHECK(norm.normalize(1, 0, 15.0) == doctest::Approx(0.5));

    // Task 2 has independent state.
    CHECK(norm.normalize(2, 0, 10.0) == 0.5);
}

TEST_CASE("normalization preserves within-task ordering") {
    RunningNormalizer norm(1, 1);
    Rng rng(11);
    std::vector<double> raw;
    for (int i = 0; i < 50; ++i) raw.push_back(rng.uniform() * 100 - 50);
    for (double v : raw) norm.observe(1, 0, v);
    for (std::size_t i = 1; i < raw.size(); ++i) {
        const double a = norm.normalize(1, 0, raw[i - 1]);
        const double b = norm.normalize(1, 0, raw[i]);
        if (raw[i - 1] < raw[i]) CHECK(a <= b);
        if (raw[i - 1] > raw[i]) CHECK(a >= b);
    }
}

TEST_CASE("physical backends expose their objective lists") {
    CHECK(PhysicalBackend::named("frontal_area", 128).objective_names() ==
          std::vector<std::string>{"frontal_area"});
    CHECK(PhysicalBackend::named("drag", 128).objective_names() ==
          std::vector<std::string>{"drag_proxy"});
    CHECK(PhysicalBackend::named("drag_lift", 128).objective_names() ==
          std::vector<std::string>{"drag_proxy", "lift_proxy"});
    CHECK_THROWS_AS(PhysicalBackend::named("openfoam", 128), ConfigError);
}

TEST_CASE("backends evaluate unit-cube-normalized meshes") {
    const PhysicalBackend backend = PhysicalBackend::named("frontal_area", 256);
    const PhenotypeMesh small = make_box({1, 0.5, 0.25});
    const PhenotypeMesh big = make_box({100, 50, 25});
    // Same proportions, same normalized frontal area.
    CHECK(backend.evaluate(small)[0] == doctest::Approx(backend.evaluate(big)[0]).epsilon(1e-9));
    CHECK(backend.evaluate(small)[0] == doctest::Approx(0.5 * 0.25).epsilon(1e-2));
}
