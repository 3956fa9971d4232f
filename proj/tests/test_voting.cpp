#include <catch2/catch_amalgamated.hpp>

#include "latvol/special.hpp"
#include "latvol/voting.hpp"

using namespace latvol;

namespace {

Rat oracle_event_volume(const ConstraintSystem& cs)
{
    auto p = dual_convert(cs);
    REQUIRE(p);
    if (p->dim() < p->full_dim())
        return Rat(0);
    return oracle_volume_by_triangulation(*p, natural_vertex_order(*p));
}

Rat descent_event_volume(const ConstraintSystem& cs)
{
    auto p = dual_convert(cs);
    REQUIRE(p);
    if (p->dim() < p->full_dim())
        return Rat(0);
    return descend(*p).lattice_volume;
}

} // namespace

TEST_CASE("preference space indexing is lexicographic")
{
    PreferenceSpace ps(3);
    REQUIRE(ps.order_count == 6);
    REQUIRE(ps.orders[0] == std::vector<int>{0, 1, 2});
    REQUIRE(ps.orders[5] == std::vector<int>{2, 1, 0});
    REQUIRE(ps.position(0, 2) == 2);
    REQUIRE(ps.prefers(0, 0, 2));
}

TEST_CASE("plurality form marks top-ranked orders")
{
    PreferenceSpace ps(3);
    IntVector f = score_form(ps, Rule::plurality, 0, 0b111);
    int ones = 0;
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (f(i) == 1)
            ++ones;
    REQUIRE(ones == 2); // (n-1)! orders put A first
    REQUIRE(f.sum() == 2);
}

TEST_CASE("Borda weights for four candidates")
{
    PreferenceSpace ps(4);
    IntVector f = score_form(ps, Rule::borda, 0, 0b1111);
    int count[4] = {0, 0, 0, 0};
    for (Eigen::Index i = 0; i < f.size(); ++i)
        ++count[f(i).convert_to<int>()];
    REQUIRE(count[0] == 6);
    REQUIRE(count[1] == 6);
    REQUIRE(count[2] == 6);
    REQUIRE(count[3] == 6);
}

TEST_CASE("restricted plurality after an elimination")
{
    PreferenceSpace ps(4);
    // D = candidate 3 eliminated: A top among {A,B,C} on 8 of the 24 orders
    IntVector f = score_form(ps, Rule::plurality, 0, 0b0111);
    REQUIRE(f.sum() == 8);
    REQUIRE_THROWS_AS(score_form(ps, Rule::borda, 0, 0b0111), std::invalid_argument);
}

TEST_CASE("negative plurality counts last places")
{
    PreferenceSpace ps(3);
    IntVector f = score_form(ps, Rule::negative_plurality, 0, 0b111);
    REQUIRE(f.sum() == -2); // -1 on the two orders ranking A last
}

TEST_CASE("pairwise form is antisymmetric")
{
    PreferenceSpace ps2(2);
    IntVector f2 = pairwise_form(ps2, 0, 1);
    REQUIRE((f2(0) == 1 && f2(1) == -1));

    PreferenceSpace ps(3);
    IntVector f = pairwise_form(ps, 0, 1);
    REQUIRE(f.sum() == 0);
    REQUIRE((f + pairwise_form(ps, 1, 0)).isZero());
}

TEST_CASE("constraint counts match the event descriptions")
{
    PreferenceSpace ps4(4);
    VotingEvent four{.kind = VotingEvent::Kind::four_rules_winner};
    REQUIRE(build_event(ps4, four).inequalities.rows() == 36);

    VotingEvent q2{.kind = VotingEvent::Kind::other_paradox_q, .position = 2};
    REQUIRE(build_event(ps4, q2).inequalities.rows() == 33);

    VotingEvent strict{.kind = VotingEvent::Kind::strict_borda};
    REQUIRE(build_event(ps4, strict).inequalities.rows() == 33);

    VotingEvent elim{.kind = VotingEvent::Kind::elimination_f};
    REQUIRE(build_event(ps4, elim).inequalities.rows() == 24 + 3 + 3 + 2);

    PreferenceSpace ps3(3);
    VotingEvent cw{.kind = VotingEvent::Kind::condorcet_winner};
    REQUIRE(build_event(ps3, cw).inequalities.rows() == 8); // 6 sign + 2 pairwise
}

TEST_CASE("three-candidate Condorcet winner volume")
{
    PreferenceSpace ps(3);
    VotingEvent cw{.kind = VotingEvent::Kind::condorcet_winner};
    ConstraintSystem cs = build_event(ps, cw);
    Rat by_descent = descent_event_volume(cs);
    Rat by_oracle = oracle_event_volume(cs);
    REQUIRE(by_descent == by_oracle);
    // 1/16 is the classical probability of the Condorcet paradox: the
    // winner polytope has volume (1 - 1/16)/3 per candidate.
    REQUIRE(by_descent == Rat(5, 16));
}

TEST_CASE("every three-candidate event agrees with the oracle")
{
    PreferenceSpace ps(3);
    std::vector<VotingEvent> events;
    events.push_back({.kind = VotingEvent::Kind::four_rules_winner});
    events.push_back({.kind = VotingEvent::Kind::condorcet_winner});
    events.push_back({.kind = VotingEvent::Kind::condorcet_plurality});
    for (int pos = 1; pos <= 3; ++pos)
        events.push_back({.kind = VotingEvent::Kind::other_paradox_q, .position = pos});
    for (Rule rule : {Rule::plurality, Rule::negative_plurality}) {
        events.push_back({.kind = VotingEvent::Kind::strong_borda, .rule = rule});
        events.push_back({.kind = VotingEvent::Kind::reverse_strong_borda, .rule = rule});
        events.push_back({.kind = VotingEvent::Kind::elimination_f, .rule = rule});
        events.push_back({.kind = VotingEvent::Kind::strict_borda, .rule = rule});
    }
    for (const auto& e : events) {
        ConstraintSystem cs = build_event(ps, e);
        REQUIRE(descent_event_volume(cs) == oracle_event_volume(cs));
    }
}

TEST_CASE("the Condorcet winner is never the Borda loser")
{
    PreferenceSpace ps(3);
    VotingEvent q_last{.kind = VotingEvent::Kind::other_paradox_q, .position = 3};
    REQUIRE(descent_event_volume(build_event(ps, q_last)) == 0);
}

TEST_CASE("elimination of the Condorcet winner in round 2 is impossible with 3 candidates")
{
    // with two survivors, round 2 is the pairwise majority vote
    PreferenceSpace ps(3);
    VotingEvent f{.kind = VotingEvent::Kind::elimination_f};
    REQUIRE(descent_event_volume(build_event(ps, f)) == 0);
}

TEST_CASE("candidate relabeling leaves volumes unchanged")
{
    PreferenceSpace ps(3);
    for (auto kind : {VotingEvent::Kind::condorcet_winner, VotingEvent::Kind::strong_borda,
                      VotingEvent::Kind::other_paradox_q}) {
        VotingEvent base{.kind = kind, .rule = Rule::plurality, .position = 2};
        Rat ref = descent_event_volume(build_event(ps, base));
        VotingEvent rot = base;
        rot.relabel = {1, 2, 0};
        VotingEvent swap = base;
        swap.relabel = {2, 0, 1};
        REQUIRE(descent_event_volume(build_event(ps, rot)) == ref);
        REQUIRE(descent_event_volume(build_event(ps, swap)) == ref);
    }
}

TEST_CASE("composite paradox probability: both routes agree")
{
    VotingEvent e{.kind = VotingEvent::Kind::other_paradox};
    ProbabilityReport r = probability(e, 3);
    REQUIRE(r.has_alternate);
    REQUIRE(r.probability == r.alternate_probability);
    REQUIRE(r.probability > 0);
}

TEST_CASE("elimination cells and the round-1 exit sum to certainty")
{
    for (Rule rule : {Rule::plurality, Rule::negative_plurality}) {
        Rat sum = 0;
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) {
                VotingEvent cell{.kind = VotingEvent::Kind::elimination_cell, .rule = rule,
                                 .row = i, .col = j};
                sum += probability(cell, 3).probability;
            }
        VotingEvent rev{.kind = VotingEvent::Kind::reverse_strong_borda, .rule = rule};
        sum += probability(rev, 3).probability;
        REQUIRE(sum == 1);
    }
}

TEST_CASE("efficiency formula matches the cell table")
{
    for (Rule rule : {Rule::plurality, Rule::negative_plurality}) {
        VotingEvent eff{.kind = VotingEvent::Kind::elimination_efficiency, .rule = rule};
        Rat e = probability(eff, 3).probability;
        // surviving both rounds means winning: places (1..2, 1) in the table
        Rat cells = 0;
        for (int i = 1; i <= 2; ++i) {
            VotingEvent cell{.kind = VotingEvent::Kind::elimination_cell, .rule = rule,
                             .row = i, .col = 1};
            cells += probability(cell, 3).probability;
        }
        REQUIRE(e == cells);
    }
}

TEST_CASE("probability uses the oracle backend when asked")
{
    VotingEvent cw{.kind = VotingEvent::Kind::condorcet_winner};
    VoteOptions opts;
    opts.use_oracle = true;
    ProbabilityReport r = probability(cw, 3, opts);
    REQUIRE(r.probability == Rat(15, 16));
    REQUIRE(r.components[0].volume == Rat(5, 16));
}
