// Acceptance suite: runs every acceptance criterion and prints one pass/fail
// line per criterion. Criteria 1-7 run at desk scale in minutes. The
// paper-scale voting reproductions (criterion 8) take hours and are opt-in:
//   LATVOL_PAPER_TIER=q1    the Condorcet-class instance, the Borda-paradox
//                           volumes and the full-size determinism check
//   LATVOL_PAPER_TIER=full  everything, including the four-rules polytope
//                           and the elimination tables (very long)

#include "latvol/descent.hpp"
#include "latvol/io.hpp"
#include "latvol/special.hpp"
#include "latvol/voting.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

using namespace latvol;
using latvol::testing::rat_points;
using latvol::testing::random_polytope;

namespace {

int g_threads = 2;

struct Checker {
    bool ok = true;
    std::ostringstream notes;

    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            notes << (notes.tellp() > 0 ? "; " : "") << what;
        }
    }
    template <typename A, typename B>
    void expect_eq(const A& a, const B& b, const std::string& what)
    {
        expect(a == b, what);
    }
};

int g_failures = 0;

void criterion(const std::string& name, const std::function<void(Checker&)>& body)
{
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.notes << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (c.ok ? "PASS" : "FAIL") << "  " << name << "  (" << secs << " s)";
    if (!c.ok)
        line << "  [" << c.notes.str() << "]";
    std::cout << line.str() << std::endl;
    if (!c.ok)
        ++g_failures;
}

void skip(const std::string& name, const std::string& why)
{
    std::cout << "SKIP  " << name << "  [" << why << "]" << std::endl;
}

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

Rat quoted(const char* num, const char* den)
{
    return Rat(Int(num)) / Rat(Int(den));
}

// |q - printed decimal| <= half a unit in the last printed place
bool matches_decimal(const Rat& q, const std::string& digits)
{
    const std::size_t dot = digits.find('.');
    const int places = dot == std::string::npos ? 0 : static_cast<int>(digits.size() - dot - 1);
    Rat printed = 0;
    Rat scale = 1;
    for (char ch : digits) {
        if (ch == '.')
            continue;
        printed = printed * 10 + (ch - '0');
    }
    for (int i = 0; i < places; ++i)
        scale *= 10;
    Rat diff = q - printed / scale;
    if (diff < 0)
        diff = -diff;
    return diff * scale * 2 <= 1;
}

Rat event_volume(int n, const VotingEvent& e, DescentStats* stats = nullptr,
                 Eigen::Index* vertices = nullptr, Eigen::Index* supp = nullptr)
{
    PreferenceSpace ps(n);
    ConstraintSystem cs = build_event(ps, e);
    auto p = dual_convert(cs);
    if (!p)
        return Rat(0);
    if (vertices)
        *vertices = p->vertex_count();
    if (supp)
        *supp = p->facet_count();
    if (p->dim() < p->full_dim())
        return Rat(0);
    VolumeResult r = descend(*p, DescentOptions{g_threads, 1});
    if (stats)
        *stats = r.stats;
    return r.lattice_volume;
}

// ---------------------------------------------------------------- criteria

void criterion_figure1(Checker& c)
{
    auto p = dual_convert(rat_points({{Rat(1, 2), Rat(1)}, {Rat(-1, 2), Rat(1)},
                                      {Rat(0), Rat(0)}}));
    c.expect(p.has_value(), "triangle converts");
    VolumeResult r = descend(*p, DescentOptions{g_threads, 1});
    c.expect_eq(r.lattice_volume, 1, "Vol(P) = 1");

    auto find_gen = [&](int x, int y, int z) {
        IntVector v(3);
        v << x, y, z;
        for (Eigen::Index i = 0; i < p->vertex_count(); ++i)
            if (p->generators().row(i).transpose() == v)
                return i;
        return Eigen::Index(-1);
    };
    const Eigen::Index v = find_gen(1, 2, 2), w = find_gen(-1, 2, 2), o = find_gen(0, 0, 1);
    c.expect(v >= 0 && w >= 0 && o >= 0, "homogenized generators (1,2,2), (-1,2,2), (0,0,1)");

    c.expect_eq(simplex_volume(*p, {v, w}), Rat(1), "Vol(E) = 1");
    c.expect_eq(simplex_volume(*p, {o, v}), Rat(1, 2), "Vol(F) = 1/2");

    auto facet_with = [&](Eigen::Index on1, Eigen::Index on2) -> const FacetForm* {
        for (const auto& f : p->facets())
            if (f.incident.test(static_cast<std::size_t>(on1)) &&
                f.incident.test(static_cast<std::size_t>(on2)))
                return &f;
        return nullptr;
    };
    const FacetForm* f_edge = facet_with(o, v);
    const FacetForm* e_edge = facet_with(v, w);
    c.expect(f_edge && e_edge, "facets F and E exist");
    c.expect_eq(lattice_height(*p, *f_edge, w), Rat(2), "Ht_F(w) = 2");
    c.expect_eq(lattice_height(*p, *e_edge, o), Rat(1), "Ht_E(0) = 1");

    // heights over the vertex {v} inside the edges, in the translated
    // affine lattice of the caption: cone height times k(face)/k(subface)
    auto point_v = dual_convert(rat_points({{Rat(1, 2), Rat(1)}}));
    auto edge_e = dual_convert(rat_points({{Rat(1, 2), Rat(1)}, {Rat(-1, 2), Rat(1)}}));
    auto edge_f = dual_convert(rat_points({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}}));
    c.expect_eq(point_v->grading_denominator(), 2, "k({v}) = 2");

    auto vertex_height = [&](const HomogenizedPolytope& edge, bool at_origin) -> Rat {
        // facet of the edge incident to v = the generator with delta 2
        Eigen::Index gv = -1, gother = -1;
        for (Eigen::Index i = 0; i < 2; ++i)
            (edge.delta_of(i) == 2 && edge.original_vertex(i)(0) > 0 ? gv : gother) = i;
        (void)at_origin;
        for (const auto& f : edge.facets())
            if (f.incident.test(static_cast<std::size_t>(gv)))
                return lattice_height(edge, f, gother) * Rat(edge.grading_denominator()) /
                       Rat(point_v->grading_denominator());
        return Rat(-1);
    };
    c.expect_eq(vertex_height(*edge_e, false), Rat(1), "Ht_{v}(w) = 1");
    c.expect_eq(vertex_height(*edge_f, true), Rat(1, 2), "Ht_{v}(0) = 1/2");
}

void criterion_cubes(Checker& c)
{
    for (int d = 3; d <= 14; ++d) {
        auto p = dual_convert(cube_system(d));
        VolumeResult r = descend(*p, DescentOptions{g_threads, 1});
        c.expect_eq(r.lattice_volume, factorial(d), "volume d! at d=" + std::to_string(d));
        c.expect_eq(r.stats.total_faces, int_pow(2, d) - d - 1,
                    "#D = 2^d-d-1 at d=" + std::to_string(d));
        c.expect_eq(r.stats.det_count, d * (d - 1), "#det = d(d-1) at d=" + std::to_string(d));
        c.expect_eq(r.stats.flag_decompositions, factorial(d),
                    "#Sigma = d! at d=" + std::to_string(d));
    }
    // the closed forms extrapolate to the published d=20 and d=24 values
    c.expect_eq(int_pow(2, 20) - 20 - 1, Int("1048555"), "2^20-21 stored faces at d=20");
    c.expect_eq(Int(20 * 19), Int(380), "380 determinants at d=20");
    c.expect_eq(factorial(20), Int("2432902008176640000"), "20! flag simplices");
    c.expect_eq(int_pow(2, 24) - 24 - 1, int_pow(2, 24) - 25, "2^24-25 stored faces at d=24");
    c.expect_eq(Int(24 * 23), Int(552), "552 determinants at d=24");
}

void criterion_crosses(Checker& c)
{
    for (int d = 2; d <= 12; ++d) {
        VolumeResult r = descend(cross_polytope(d), DescentOptions{g_threads, 1});
        c.expect_eq(r.lattice_volume, int_pow(2, d), "volume 2^d at d=" + std::to_string(d));
        c.expect_eq(r.stats.total_faces, 1, "#D = 1 at d=" + std::to_string(d));
        c.expect_eq(r.stats.det_count, int_pow(2, d - 1),
                    "#det = 2^(d-1) at d=" + std::to_string(d));
    }
}

void criterion_oracle_equivalence(Checker& c)
{
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int dim = 3; dim <= 6; ++dim) {
        for (int iter = 0; iter < 50; ++iter) {
            HomogenizedPolytope p = random_polytope(rng, dim, 12);
            VolumeResult r = descend(p, DescentOptions{g_threads, 1});
            std::vector<Eigen::Index> order = natural_vertex_order(p);
            for (int trial = 0; trial < 3; ++trial) {
                Rat o = oracle_volume_by_triangulation(p, order);
                if (o != r.lattice_volume) {
                    c.expect(false, "oracle mismatch at dim " + std::to_string(dim) +
                                        " iteration " + std::to_string(iter));
                    return;
                }
                for (std::size_t i = order.size(); i > 1; --i)
                    std::swap(order[i - 1], order[rng() % i]);
            }
            ++checked;
        }
    }
    c.expect_eq(checked, 200, "200 instances checked");
}

void criterion_invariances(Checker& c)
{
    // unimodular invariance: shear a fixed quadrilateral
    auto p = dual_convert(rat_points({{Rat(0), Rat(0)}, {Rat(2), Rat(0)}, {Rat(0), Rat(3)},
                                      {Rat(1), Rat(2)}}));
    auto sheared = dual_convert(rat_points({{Rat(0), Rat(0)}, {Rat(2), Rat(2)}, {Rat(0), Rat(3)},
                                            {Rat(1), Rat(3)}}));
    c.expect_eq(descend(*p).lattice_volume, descend(*sheared).lattice_volume,
                "unimodular invariance");

    // dilation by k scales by k^d
    auto tri = dual_convert(rat_points({{Rat(1, 2), Rat(1)}, {Rat(-1, 2), Rat(1)},
                                        {Rat(0), Rat(0)}}));
    auto tri5 = dual_convert(rat_points({{Rat(5, 2), Rat(5)}, {Rat(-5, 2), Rat(5)},
                                         {Rat(0), Rat(0)}}));
    c.expect_eq(descend(*tri5).lattice_volume, 25 * descend(*tri).lattice_volume,
                "dilation k^d");

    // pyramid identity at every vertex of the square pyramid
    auto pyr = dual_convert(rat_points({{Rat(0), Rat(0), Rat(0)},
                                        {Rat(1), Rat(0), Rat(0)},
                                        {Rat(0), Rat(1), Rat(0)},
                                        {Rat(1), Rat(1), Rat(0)},
                                        {Rat(0), Rat(0), Rat(1)}}));
    Rat total = descend(*pyr).cone_volume;
    for (Eigen::Index v = 0; v < pyr->vertex_count(); ++v) {
        Rat sum = 0;
        for (const auto& f : pyr->facets()) {
            Rat h = lattice_height(*pyr, f, v);
            if (h == 0)
                continue;
            IntMatrix sub(static_cast<Eigen::Index>(f.incident.count()), pyr->edim());
            Eigen::Index k = 0;
            f.incident.for_each(
                [&](std::size_t i) { sub.row(k++) = pyr->generators().row(static_cast<Eigen::Index>(i)); });
            sum += h * descend(*dual_convert_from_generators(sub, pyr->grading_form())).cone_volume;
        }
        c.expect_eq(sum, total, "pyramid identity at vertex " + std::to_string(v));
    }

    // grading denominator: Vol(P) = 2 Vol(Pbar) on the half-height segment
    auto half = dual_convert(rat_points({{Rat(1, 2), Rat(1, 2)}, {Rat(-1, 2), Rat(1, 2)}}));
    VolumeResult hr = descend(*half);
    c.expect_eq(hr.grading_denominator, 2, "grading denominator 2");
    c.expect_eq(hr.lattice_volume, 2 * hr.cone_volume, "Vol(P) = 2 Vol(Pbar)");
    c.expect_eq(hr.lattice_volume, 1, "lattice length 1");
}

void check_determinism(Checker& c, const HomogenizedPolytope& p, const std::string& tag)
{
    VolumeResult a = descend(p, DescentOptions{1, 1});
    for (int threads : {4, 8}) {
        VolumeResult b = descend(p, DescentOptions{threads, 1});
        c.expect(a.lattice_volume == b.lattice_volume && a.stats.total_faces == b.stats.total_faces &&
                     a.stats.det_count == b.stats.det_count &&
                     a.stats.flag_decompositions == b.stats.flag_decompositions &&
                     a.stats.layer_sizes == b.stats.layer_sizes,
                 tag + " identical at " + std::to_string(threads) + " workers");
    }
}

void criterion_determinism(Checker& c)
{
    // strict-Borda-class fixture at desk scale: the 3-candidate analogue
    PreferenceSpace ps(3);
    VotingEvent strict{.kind = VotingEvent::Kind::strict_borda};
    auto p = dual_convert(build_event(ps, strict));
    c.expect(p.has_value(), "strict Borda (3 candidates) nonempty");
    check_determinism(c, *p, "strict Borda n=3");

    std::mt19937_64 rng(99);
    check_determinism(c, random_polytope(rng, 5, 12), "random 5-polytope");
    check_determinism(c, *dual_convert(cube_system(7)), "7-cube");
}

void criterion_voting_desk(Checker& c)
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
        auto p = dual_convert(cs);
        c.expect(p.has_value(), event_name(e) + " nonempty");
        Rat by_descent = p->dim() < p->full_dim()
                             ? Rat(0)
                             : descend(*p, DescentOptions{g_threads, 1}).lattice_volume;
        Rat by_oracle = p->dim() < p->full_dim()
                            ? Rat(0)
                            : oracle_volume_by_triangulation(*p, natural_vertex_order(*p));
        c.expect_eq(by_descent, by_oracle, event_name(e) + " equals oracle");

        // candidate-relabeling invariance
        VotingEvent rot = e;
        rot.relabel = {1, 2, 0};
        ConstraintSystem cs2 = build_event(ps, rot);
        auto q = dual_convert(cs2);
        Rat rotated = (!q || q->dim() < q->full_dim())
                          ? Rat(0)
                          : descend(*q, DescentOptions{g_threads, 1}).lattice_volume;
        c.expect_eq(rotated, by_descent, event_name(e) + " relabeling invariance");
    }
}

// ------------------------------------------------------- paper-scale tier

namespace paper {

const Rat vol_e = quoted("10658098255011916449318509", "68475651442606080000000000");
const Rat q1 = quoted(
    "155143659305367638658204514673150261711154597948604269685210422288200009",
    "1102320838271070278766883635115881896290018550251848550368411648000000000");
const Rat q2 = quoted(
    "8007917191946827148905632396266883808060150761021309697108559220076039",
    "1653481257406605418150325452673822844435027825377772825552617472000000000");
const Rat q3 = quoted(
    "2072705500667484952215435851434572363770941977453049707343465792912717",
    "16534812574066054181503254526738228444350278253777728255526174720000000000");
const Rat other_paradox_prob = quoted(
    "82151877420135756441271759814103410444372449587666146678429057993673107",
    "1377901047838837848458604543894852370362523187814810687960514560000000000");
const Rat four_rules_vol = quoted(
    "15434295102897069492696787224587569493324878059069286556500157094466280221"
    "0031839904092203533576766900008697462518883193615863751857064434519917747",
    "19734891994161694286368932836293271062441599301077174316463585667073366250"
    "92787497360174222493081399494071993084340140223731960203182080000000000000");
const Rat strong_borda_vol = quoted("325451674835828550681491", "68475651442606080000000000");
const Rat reverse_strong_borda_vol = quoted("104898234852130241", "21035720123168587776");
const Rat f_pr = quoted("6537508029403236323215409545161316879405265171603",
                        "1989889702166773519891328549909849702400000000000000");
const Rat f_npr = quoted("87391394898401644146716674012811354620163132417",
                         "31091026140009682822081785811945799024640000000000");
const Rat eff_pr = quoted("129178312275188795293522359266689257253407234828397",
                          "139023462671726486558162887377734860800000000000000");
const Rat eff_npr = quoted("2035523745603707762358521726967860659560986470207",
                           "2172171707454289770732195078088823930880000000000");
const Rat rev_prob_pr = quoted("104898234852130241", "4408976007260798976");
const Rat rev_prob_npr = quoted("325451674835828550681491", "14352135440302080000000000");

const char* pr_cells[3][3] = {{"0.69605467532", "0.04320695864", "0.00335247384"},
                              {"0.06678615010", "0.08902016651", "0.01327777245"},
                              {"0.01396067951", "0.02015490336", "0.03039424802"}};
const char* npr_cells[3][3] = {{"0.46569938269", "0.07611279571", "0.00978979031"},
                               {"0.16256921634", "0.11815379945", "0.01272253146"},
                               {"0.04072126773", "0.07383508505", "0.01771994652"}};

} // namespace paper

void criterion_paper_q1(Checker& c)
{
    // Q4 first: the Condorcet winner cannot be the Borda loser, so the
    // polytope misses full dimension and its 23-dimensional volume is 0.
    {
        VotingEvent q4{.kind = VotingEvent::Kind::other_paradox_q, .position = 4};
        Rat vol = event_volume(4, q4);
        c.expect_eq(vol, 0, "vol Q4 = 0");
    }

    // Borda-paradox volumes (strict-Borda class)
    {
        VotingEvent rev{.kind = VotingEvent::Kind::reverse_strong_borda,
                        .rule = Rule::plurality};
        c.expect_eq(event_volume(4, rev), paper::reverse_strong_borda_vol, "vol B_RevPR");
        VotingEvent revn{.kind = VotingEvent::Kind::reverse_strong_borda,
                         .rule = Rule::negative_plurality};
        c.expect_eq(event_volume(4, revn), paper::strong_borda_vol, "vol B_RevNPR");
        VotingEvent sg{.kind = VotingEvent::Kind::strong_borda, .rule = Rule::plurality};
        c.expect_eq(event_volume(4, sg), paper::strong_borda_vol, "vol B_Sg (strong, PR)");
    }

    // full-size determinism fixture
    {
        PreferenceSpace ps(4);
        VotingEvent strict{.kind = VotingEvent::Kind::strict_borda};
        auto p = dual_convert(build_event(ps, strict));
        c.expect(p.has_value(), "strict Borda n=4 nonempty");
        c.expect_eq(p->facet_count(), 33, "strict Borda #supp 33");
        check_determinism(c, *p, "strict Borda n=4");
    }

    // the Condorcet-class instance: Q1 with its published combinatorics
    {
        VotingEvent q1e{.kind = VotingEvent::Kind::other_paradox_q, .position = 1};
        DescentStats stats;
        Eigen::Index vertices = 0, supp = 0;
        Rat vol = event_volume(4, q1e, &stats, &vertices, &supp);
        c.expect_eq(vertices, 51168, "Q1 has 51,168 vertices");
        c.expect_eq(supp, 33, "Q1 has 33 support hyperplanes");
        c.expect_eq(vol, paper::q1, "vol Q1 exact");
        std::cout << "      [info] Q1 descent: #D=" << stats.total_faces.str()
                  << " #det=" << stats.det_count.str()
                  << " #Sigma=" << stats.flag_decompositions.str() << std::endl;
    }
}

void criterion_paper_full(Checker& c)
{
    VotingEvent q2e{.kind = VotingEvent::Kind::other_paradox_q, .position = 2};
    VotingEvent q3e{.kind = VotingEvent::Kind::other_paradox_q, .position = 3};
    Rat vol_q2 = event_volume(4, q2e);
    Rat vol_q3 = event_volume(4, q3e);
    c.expect_eq(vol_q2, paper::q2, "vol Q2 exact");
    c.expect_eq(vol_q3, paper::q3, "vol Q3 exact");

    // consistency identity with the quoted vol E; both routes print the
    // same probability
    Rat direct = 12 * (vol_q2 + vol_q3);
    Rat indirect = 4 * (paper::vol_e - paper::q1);
    c.expect_eq(direct, indirect, "12(Q2+Q3) = 4(E-Q1)");
    c.expect_eq(direct, paper::other_paradox_prob, "other-paradox probability exact");
    c.expect(matches_decimal(direct, "0.059621"), "~0.059621");

    // Condorcet-winner volume, pinned by the two quoted conditional
    // reverse-Borda probabilities
    VotingEvent cw{.kind = VotingEvent::Kind::condorcet_winner};
    Rat p_cw = event_volume(4, cw);
    c.expect_eq(paper::reverse_strong_borda_vol / p_cw, paper::rev_prob_pr,
                "reverse Borda probability (PR) ~0.02379");
    c.expect_eq(paper::strong_borda_vol / p_cw, paper::rev_prob_npr,
                "reverse Borda probability (NPR) ~0.02268");

    // elimination: F volumes and the Condorcet efficiencies
    VotingEvent fpr{.kind = VotingEvent::Kind::elimination_f, .rule = Rule::plurality};
    VotingEvent fnpr{.kind = VotingEvent::Kind::elimination_f, .rule = Rule::negative_plurality};
    Rat vol_fpr = event_volume(4, fpr);
    Rat vol_fnpr = event_volume(4, fnpr);
    c.expect_eq(vol_fpr, paper::f_pr, "vol F_PR exact");
    c.expect_eq(vol_fnpr, paper::f_npr, "vol F_NPR exact");
    Rat eff_pr = (p_cw - paper::reverse_strong_borda_vol - 3 * vol_fpr) / p_cw;
    Rat eff_npr = (p_cw - paper::strong_borda_vol - 3 * vol_fnpr) / p_cw;
    c.expect_eq(eff_pr, paper::eff_pr, "PR elimination efficiency exact");
    c.expect_eq(eff_npr, paper::eff_npr, "NPR elimination efficiency exact");
    c.expect(matches_decimal(eff_pr, "0.929184"), "~0.929184");
    c.expect(matches_decimal(eff_npr, "0.937092"), "~0.937092");

    // elimination tables: 9 cells per rule, the published approximations,
    // and the exact ten-entry sum 1 with the reverse-Borda entry
    for (Rule rule : {Rule::plurality, Rule::negative_plurality}) {
        const bool pr = rule == Rule::plurality;
        Rat sum = pr ? paper::reverse_strong_borda_vol / p_cw : paper::strong_borda_vol / p_cw;
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                VotingEvent cell{.kind = VotingEvent::Kind::elimination_cell, .rule = rule,
                                 .row = i, .col = j};
                VoteOptions opts;
                opts.threads = g_threads;
                ProbabilityReport rep = probability(cell, 4, opts);
                sum += rep.probability;
                const char* printed = pr ? paper::pr_cells[i - 1][j - 1]
                                         : paper::npr_cells[i - 1][j - 1];
                c.expect(matches_decimal(rep.probability, printed),
                         std::string(pr ? "PR" : "NPR") + " cell (" + std::to_string(i) + "," +
                             std::to_string(j) + ") ~ " + printed);
            }
        }
        c.expect_eq(sum, 1, std::string(pr ? "PR" : "NPR") + " ten entries sum to 1");
    }

    // the four-rules polytope, the longest single computation
    VotingEvent four{.kind = VotingEvent::Kind::four_rules_winner};
    Eigen::Index vertices = 0, supp = 0;
    Rat vol = event_volume(4, four, nullptr, &vertices, &supp);
    c.expect_eq(vertices, 233644, "four-rules polytope has 233,644 vertices");
    c.expect_eq(supp, 36, "four-rules polytope has 36 support hyperplanes");
    c.expect_eq(vol, paper::four_rules_vol, "vol P exact");
    c.expect_eq(4 * vol, 4 * paper::four_rules_vol, "4 vol P exact");
    c.expect(matches_decimal(4 * vol, "0.312833"), "~0.312833");
}

} // namespace

int main()
{
    const char* tier_env = std::getenv("LATVOL_PAPER_TIER");
    const std::string tier = tier_env ? tier_env : "";
    if (const char* t = std::getenv("LATVOL_THREADS"))
        g_threads = std::max(1, std::atoi(t));

    criterion("1. Figure-1 fixture: volumes and lattice heights", criterion_figure1);
    criterion("2. cube family d=3..14: d!, 2^d-d-1, d(d-1), d!", criterion_cubes);
    criterion("3. cross polytopes d=2..12: 2^d, #D=1, #det=2^(d-1)", criterion_crosses);
    criterion("4. descent equals pulling oracle on 200 random polytopes",
              criterion_oracle_equivalence);
    criterion("5. invariance suite: unimodular, dilation, pyramid, grading denominator",
              criterion_invariances);
    criterion("6. determinism across 1/4/8 workers", criterion_determinism);
    criterion("7. three-candidate events equal the oracle, relabeling-invariant",
              criterion_voting_desk);

    if (tier == "q1" || tier == "full")
        criterion("8a. paper scale: Q4=0, Borda-paradox volumes, strict Borda n=4, vol Q1",
                  criterion_paper_q1);
    else
        skip("8a. paper scale (Condorcet class)", "set LATVOL_PAPER_TIER=q1 or full; hours");
    if (tier == "full")
        criterion("8b. paper scale: Q2/Q3 identity, efficiencies, tables, four rules",
                  criterion_paper_full);
    else
        skip("8b. paper scale (full reproduction)", "set LATVOL_PAPER_TIER=full; many hours");

    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all executed criteria passed" << std::endl;
    return 0;
}
