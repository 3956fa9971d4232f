#include <catch2/catch_amalgamated.hpp>

#include "latvol/descent.hpp"
#include "latvol/special.hpp"
#include "test_support.hpp"

#include <random>

using namespace latvol;
using latvol::testing::rat_points;
using latvol::testing::random_polytope;

namespace {

ConstraintSystem cube_system(int d)
{
    ConstraintSystem cs;
    cs.ambient_dim = d + 1;
    cs.inequalities = IntMatrix::Zero(2 * d, d + 1);
    for (int i = 0; i < d; ++i) {
        cs.inequalities(i, i) = 1;
        cs.inequalities(d + i, i) = -1;
        cs.inequalities(d + i, d) = 1;
    }
    cs.equations = IntMatrix(0, d + 1);
    cs.grading = IntVector::Zero(d + 1);
    cs.grading(d) = 1;
    return cs;
}

HomogenizedPolytope cross_polytope(int d)
{
    RatMatrix pts(2 * d, d);
    pts.setZero();
    for (int i = 0; i < d; ++i) {
        pts(2 * i, i) = 1;
        pts(2 * i + 1, i) = -1;
    }
    return *dual_convert(pts);
}

} // namespace

TEST_CASE("parallelotope recognition")
{
    auto cube = dual_convert(cube_system(3));
    SpecialShape s = recognize_parallelotope(*cube);
    REQUIRE(s.kind == SpecialShape::Kind::parallelotope);
    REQUIRE(s.neighbors.size() == 3);
    REQUIRE(parallelotope_volume(*cube, s) == 6);

    // simplex is not a parallelotope
    auto simplex = dual_convert(rat_points({{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}}));
    REQUIRE(recognize_parallelotope(*simplex).kind == SpecialShape::Kind::none);
    REQUIRE(recognize_special(*simplex).kind == SpecialShape::Kind::simplex);
}

TEST_CASE("skewed parallelotopes and rectangles")
{
    auto rect = dual_convert(rat_points({{Rat(0), Rat(0)}, {Rat(2), Rat(0)},
                                         {Rat(0), Rat(3)}, {Rat(2), Rat(3)}}));
    SpecialShape s = recognize_parallelotope(*rect);
    REQUIRE(s.kind == SpecialShape::Kind::parallelotope);
    REQUIRE(parallelotope_volume(*rect, s) == 12);
    REQUIRE(descend(*rect).cone_volume == 12);

    // affine image of the unit square
    auto skew = dual_convert(rat_points({{Rat(0), Rat(0)}, {Rat(1), Rat(0)},
                                         {Rat(1), Rat(3)}, {Rat(2), Rat(3)}}));
    SpecialShape t = recognize_parallelotope(*skew);
    REQUIRE(t.kind == SpecialShape::Kind::parallelotope);
    REQUIRE(parallelotope_volume(*skew, t) == descend(*skew).cone_volume);
}

TEST_CASE("recognizers reject perturbed shapes")
{
    // one vertex of the unit cube moved
    auto moved = dual_convert(rat_points({{Rat(0), Rat(0), Rat(0)},
                                          {Rat(1), Rat(0), Rat(0)},
                                          {Rat(0), Rat(1), Rat(0)},
                                          {Rat(1), Rat(1), Rat(0)},
                                          {Rat(0), Rat(0), Rat(1)},
                                          {Rat(1), Rat(0), Rat(1)},
                                          {Rat(0), Rat(1), Rat(1)},
                                          {Rat(1), Rat(1), Rat(2)}}));
    REQUIRE(recognize_parallelotope(*moved).kind == SpecialShape::Kind::none);

    // antipodal pairs without a common midpoint
    auto lopsided = dual_convert(rat_points({{Rat(2), Rat(0)}, {Rat(-1), Rat(0)},
                                             {Rat(0), Rat(1)}, {Rat(0), Rat(-1)}}));
    REQUIRE(recognize_cross_polytope(*lopsided).kind == SpecialShape::Kind::none);
    REQUIRE(descend(*lopsided).lattice_volume == 6);
}

TEST_CASE("cross polytope recognition and volume")
{
    for (int d = 2; d <= 5; ++d) {
        auto p = cross_polytope(d);
        SpecialShape s = recognize_cross_polytope(p);
        REQUIRE(s.kind == SpecialShape::Kind::cross_polytope);
        REQUIRE(cross_polytope_volume(p, s) == int_pow(2, d));
    }
    // centrally symmetric with unequal axis lengths is still a cross
    auto stretched = dual_convert(rat_points({{Rat(2), Rat(0)}, {Rat(-2), Rat(0)},
                                              {Rat(0), Rat(1)}, {Rat(0), Rat(-1)}}));
    SpecialShape s = recognize_cross_polytope(*stretched);
    REQUIRE(s.kind == SpecialShape::Kind::cross_polytope);
    REQUIRE(cross_polytope_volume(*stretched, s) == 8);
    REQUIRE(descend(*stretched).cone_volume == 8);
    // the segment [-1,1]
    auto seg = dual_convert(rat_points({{Rat(-1)}, {Rat(1)}}));
    REQUIRE(descend(*seg).lattice_volume == 2);
}

TEST_CASE("fast paths agree with descent")
{
    for (int d = 2; d <= 6; ++d) {
        auto cube = dual_convert(cube_system(d));
        SpecialShape sp = recognize_parallelotope(*cube);
        REQUIRE(sp.kind == SpecialShape::Kind::parallelotope);
        REQUIRE(parallelotope_volume(*cube, sp) == descend(*cube).cone_volume);

        auto cross = cross_polytope(d);
        SpecialShape sc = recognize_cross_polytope(cross);
        REQUIRE(sc.kind == SpecialShape::Kind::cross_polytope);
        REQUIRE(cross_polytope_volume(cross, sc) == descend(cross).cone_volume);
    }
}

TEST_CASE("pulling triangulation of the cube")
{
    auto cube = dual_convert(cube_system(3));
    OracleResult r = pulling_triangulation(*cube, natural_vertex_order(*cube));
    REQUIRE(r.lattice_volume == 6);
    REQUIRE(r.simplices == 6);
}

TEST_CASE("triangle fixture oracle")
{
    auto p = dual_convert(rat_points({{Rat(1, 2), Rat(1)}, {Rat(-1, 2), Rat(1)},
                                      {Rat(0), Rat(0)}}));
    REQUIRE(oracle_volume_by_triangulation(*p, natural_vertex_order(*p)) == 1);
}

TEST_CASE("oracle is independent of the vertex order")
{
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 5; ++iter) {
        HomogenizedPolytope p = random_polytope(rng, 3, 9);
        std::vector<Eigen::Index> order = natural_vertex_order(p);
        Rat ref = oracle_volume_by_triangulation(p, order);
        for (int shuffle = 0; shuffle < 4; ++shuffle) {
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[rng() % i]);
            REQUIRE(oracle_volume_by_triangulation(p, order) == ref);
        }
    }
}

TEST_CASE("oracle agrees with descent on random polytopes")
{
    std::mt19937_64 rng(11);
    for (int dim = 2; dim <= 4; ++dim) {
        for (int iter = 0; iter < 5; ++iter) {
            HomogenizedPolytope p = random_polytope(rng, dim, 10);
            VolumeResult r = descend(p);
            REQUIRE(oracle_volume_by_triangulation(p, natural_vertex_order(p)) ==
                    r.lattice_volume);
        }
    }
}

TEST_CASE("oracle bounds")
{
    auto p = dual_convert(cube_system(3));
    OracleLimits tight{2, 64};
    REQUIRE_THROWS_AS(pulling_triangulation(*p, natural_vertex_order(*p), tight),
                      OracleBoundError);
    OracleLimits few{8, 4};
    REQUIRE_THROWS_AS(pulling_triangulation(*p, natural_vertex_order(*p), few),
                      OracleBoundError);
    std::vector<Eigen::Index> bad(static_cast<std::size_t>(p->vertex_count()), 0);
    REQUIRE_THROWS_AS(pulling_triangulation(*p, bad, OracleLimits{}), std::invalid_argument);
}
