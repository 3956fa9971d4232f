#include "latvol/voting.hpp"

#include "latvol/special.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace latvol {

PreferenceSpace::PreferenceSpace(int n_candidates) : candidates(n_candidates)
{
    if (n_candidates < 1 || n_candidates > 8)
        throw std::invalid_argument("candidate count out of range");
    std::vector<int> perm(static_cast<std::size_t>(n_candidates));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        orders.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    order_count = static_cast<int>(orders.size());
}

int PreferenceSpace::position(int order, int candidate) const
{
    const auto& o = orders[static_cast<std::size_t>(order)];
    for (int pos = 0; pos < candidates; ++pos)
        if (o[static_cast<std::size_t>(pos)] == candidate)
            return pos;
    throw std::invalid_argument("unknown candidate");
}

bool PreferenceSpace::prefers(int order, int x, int y) const
{
    return position(order, x) < position(order, y);
}

int PreferenceSpace::top_among(int order, unsigned alive_mask) const
{
    for (int c : orders[static_cast<std::size_t>(order)])
        if (alive_mask & (1u << c))
            return c;
    throw std::invalid_argument("empty alive set");
}

int PreferenceSpace::bottom_among(int order, unsigned alive_mask) const
{
    const auto& o = orders[static_cast<std::size_t>(order)];
    for (int pos = candidates - 1; pos >= 0; --pos)
        if (alive_mask & (1u << o[static_cast<std::size_t>(pos)]))
            return o[static_cast<std::size_t>(pos)];
    throw std::invalid_argument("empty alive set");
}

IntVector score_form(const PreferenceSpace& ps, Rule rule, int candidate, unsigned alive_mask)
{
    if (!(alive_mask & (1u << candidate)))
        throw std::invalid_argument("candidate not alive");
    const unsigned full = (1u << ps.candidates) - 1;
    IntVector form = IntVector::Zero(ps.order_count);
    switch (rule) {
    case Rule::plurality:
        for (int o = 0; o < ps.order_count; ++o)
            if (ps.top_among(o, alive_mask) == candidate)
                form(o) = 1;
        break;
    case Rule::negative_plurality:
        for (int o = 0; o < ps.order_count; ++o)
            if (ps.bottom_among(o, alive_mask) == candidate)
                form(o) = -1;
        break;
    case Rule::borda:
        if (alive_mask != full)
            throw std::invalid_argument("Borda only full field");
        for (int o = 0; o < ps.order_count; ++o)
            form(o) = ps.candidates - 1 - ps.position(o, candidate);
        break;
    }
    return form;
}

IntVector pairwise_form(const PreferenceSpace& ps, int x, int y)
{
    if (x == y)
        throw std::invalid_argument("pairwise comparison needs distinct candidates");
    IntVector form(ps.order_count);
    for (int o = 0; o < ps.order_count; ++o)
        form(o) = ps.prefers(o, x, y) ? 1 : -1;
    return form;
}

namespace {

unsigned full_mask(const PreferenceSpace& ps)
{
    return (1u << ps.candidates) - 1;
}

struct EventBuilder {
    const PreferenceSpace& ps;
    const std::vector<int>& relabel;
    std::vector<IntVector> rows;

    int cand(int role) const
    {
        return relabel.empty() ? role : relabel[static_cast<std::size_t>(role)];
    }

    void beats(int role_x, int role_y) { rows.push_back(pairwise_form(ps, cand(role_x), cand(role_y))); }

    void condorcet_winner(int role)
    {
        for (int r = 0; r < ps.candidates; ++r)
            if (r != role)
                beats(role, r);
    }

    void condorcet_loser(int role)
    {
        for (int r = 0; r < ps.candidates; ++r)
            if (r != role)
                beats(r, role);
    }

    // score(role_x) >= score(role_y) under the rule among the alive roles
    void outscores(Rule rule, int role_x, int role_y, unsigned alive_roles)
    {
        unsigned alive = 0;
        for (int r = 0; r < ps.candidates; ++r)
            if (alive_roles & (1u << r))
                alive |= 1u << cand(r);
        rows.push_back(score_form(ps, rule, cand(role_x), alive) -
                       score_form(ps, rule, cand(role_y), alive));
    }

    void rule_winner(Rule rule, int role)
    {
        for (int r = 0; r < ps.candidates; ++r)
            if (r != role)
                outscores(rule, role, r, full_mask(ps));
    }

    void rule_loser(Rule rule, int role)
    {
        for (int r = 0; r < ps.candidates; ++r)
            if (r != role)
                outscores(rule, r, role, full_mask(ps));
    }

    ConstraintSystem finish() const
    {
        const int n = ps.order_count;
        ConstraintSystem cs;
        cs.ambient_dim = n;
        cs.inequalities = IntMatrix(n + static_cast<Eigen::Index>(rows.size()), n);
        cs.inequalities.topRows(n) = IntMatrix::Identity(n, n);
        for (std::size_t i = 0; i < rows.size(); ++i)
            cs.inequalities.row(n + static_cast<Eigen::Index>(i)) = rows[i].transpose();
        cs.equations = IntMatrix(0, n);
        cs.grading = IntVector::Constant(n, 1);
        return cs;
    }
};

void check_relabel(const VotingEvent& e, int n)
{
    if (e.relabel.empty())
        return;
    if (static_cast<int>(e.relabel.size()) != n)
        throw std::invalid_argument("relabeling must list every candidate");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int c : e.relabel) {
        if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)])
            throw std::invalid_argument("relabeling must be a permutation");
        seen[static_cast<std::size_t>(c)] = true;
    }
}

// A's Borda position is `pos` (1-based); the candidates above A are the
// lowest-numbered rival roles, the paper's choices for Q2 and Q3.
void borda_position(EventBuilder& b, int n, int pos)
{
    if (pos < 1 || pos > n)
        throw std::invalid_argument("Borda position out of range");
    int above = pos - 1;
    int role = 1;
    for (int k = 0; k < above; ++k)
        b.outscores(Rule::borda, role++, 0, full_mask(b.ps));
    for (; role < n; ++role)
        b.outscores(Rule::borda, 0, role, full_mask(b.ps));
}

} // namespace

std::string event_name(const VotingEvent& e)
{
    auto rule_tag = [&]() {
        switch (e.rule) {
        case Rule::plurality:
            return std::string("plurality");
        case Rule::negative_plurality:
            return std::string("negative-plurality");
        case Rule::borda:
            return std::string("borda");
        }
        return std::string("?");
    };
    switch (e.kind) {
    case VotingEvent::Kind::four_rules_winner:
        return "four-rules-same-winner";
    case VotingEvent::Kind::condorcet_winner:
        return "condorcet-winner";
    case VotingEvent::Kind::condorcet_plurality:
        return "condorcet-plurality-winner";
    case VotingEvent::Kind::other_paradox:
        return "condorcet-other-paradox";
    case VotingEvent::Kind::other_paradox_q:
        return "condorcet-other-paradox-q" + std::to_string(e.position);
    case VotingEvent::Kind::strong_borda:
        return "strong-borda-paradox-" + rule_tag();
    case VotingEvent::Kind::reverse_strong_borda:
        return "reverse-strong-borda-paradox-" + rule_tag();
    case VotingEvent::Kind::elimination_f:
        return "elimination-f-" + rule_tag();
    case VotingEvent::Kind::elimination_cell:
        return "elimination-cell-" + std::to_string(e.row) + std::to_string(e.col) + "-" +
               rule_tag();
    case VotingEvent::Kind::elimination_efficiency:
        return "elimination-efficiency-" + rule_tag();
    case VotingEvent::Kind::strict_borda:
        return "strict-borda-" + rule_tag();
    }
    return "?";
}

ConstraintSystem build_event(const PreferenceSpace& ps, const VotingEvent& e)
{
    const int n = ps.candidates;
    check_relabel(e, n);
    EventBuilder b{ps, e.relabel, {}};
    switch (e.kind) {
    case VotingEvent::Kind::four_rules_winner:
        b.rule_winner(Rule::plurality, 0);
        b.rule_winner(Rule::negative_plurality, 0);
        b.rule_winner(Rule::borda, 0);
        b.condorcet_winner(0);
        break;
    case VotingEvent::Kind::condorcet_winner:
        b.condorcet_winner(0);
        break;
    case VotingEvent::Kind::condorcet_plurality:
        b.condorcet_winner(0);
        b.rule_winner(Rule::plurality, 0);
        break;
    case VotingEvent::Kind::other_paradox_q:
        b.condorcet_winner(0);
        b.rule_winner(Rule::plurality, 0);
        borda_position(b, n, e.position);
        break;
    case VotingEvent::Kind::strong_borda:
        b.condorcet_loser(0);
        b.rule_winner(e.rule, 0);
        break;
    case VotingEvent::Kind::reverse_strong_borda:
        b.condorcet_winner(0);
        b.rule_loser(e.rule, 0);
        break;
    case VotingEvent::Kind::elimination_f: {
        if (n < 3)
            throw std::invalid_argument("elimination needs at least 3 candidates");
        b.condorcet_winner(0);
        const int out = n - 1; // the last role is eliminated first
        for (int r = 0; r < n; ++r)
            if (r != out)
                b.outscores(e.rule, r, out, full_mask(ps));
        const unsigned survivors = full_mask(ps) & ~(1u << out);
        for (int r = 1; r < n - 1; ++r)
            b.outscores(e.rule, r, 0, survivors);
        break;
    }
    case VotingEvent::Kind::strict_borda: {
        // complete majority order role0 > role1 > ... reversed by the scores
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                b.beats(i, j);
        for (int i = 0; i + 1 < n; ++i)
            b.outscores(e.rule, i + 1, i, full_mask(ps));
        break;
    }
    default:
        throw std::invalid_argument("composite event has several polytopes");
    }
    return b.finish();
}

std::vector<EventComponent> build_event_components(const PreferenceSpace& ps,
                                                   const VotingEvent& e)
{
    const int n = ps.candidates;
    check_relabel(e, n);
    std::vector<EventComponent> out;

    auto single = [&](VotingEvent ev, const std::string& label, Int mult) {
        out.push_back(EventComponent{label, build_event(ps, ev), mult});
    };

    switch (e.kind) {
    case VotingEvent::Kind::other_paradox: {
        for (int pos = 1; pos <= n; ++pos) {
            VotingEvent q = e;
            q.kind = VotingEvent::Kind::other_paradox_q;
            q.position = pos;
            single(q, "q" + std::to_string(pos), pos >= 2 && pos <= n - 1 ? Int(n) * (n - 1) : Int(0));
        }
        VotingEvent base = e;
        base.kind = VotingEvent::Kind::condorcet_plurality;
        single(base, "condorcet-plurality", 0);
        return out;
    }
    case VotingEvent::Kind::elimination_cell: {
        if (e.row < 1 || e.row > n - 1 || e.col < 1 || e.col > n - 1)
            throw std::invalid_argument("cell places must keep the winner alive until round 2");
        // Basic polytopes: a full round-1 score order with role 0 at place
        // `row`, and a full round-2 order of the survivors with role 0 at
        // place `col`. Rival-permutation orbits are collapsed into one
        // representative with the orbit size as multiplicity.
        std::vector<int> rivals;
        for (int r = 1; r < n; ++r)
            rivals.push_back(r);
        std::vector<std::pair<std::vector<int>, std::vector<int>>> basics;
        std::vector<int> arrangement = rivals;
        std::sort(arrangement.begin(), arrangement.end());
        do {
            std::vector<int> round1(static_cast<std::size_t>(n));
            std::size_t next = 0;
            for (int place = 0; place < n; ++place) {
                if (place == e.row - 1)
                    round1[static_cast<std::size_t>(place)] = 0;
                else
                    round1[static_cast<std::size_t>(place)] = arrangement[next++];
            }
            std::vector<int> survivors(round1.begin(), round1.end() - 1);
            std::vector<int> others;
            for (int s : survivors)
                if (s != 0)
                    others.push_back(s);
            std::sort(others.begin(), others.end());
            do {
                std::vector<int> round2(static_cast<std::size_t>(n - 1));
                std::size_t k = 0;
                for (int place = 0; place < n - 1; ++place) {
                    if (place == e.col - 1)
                        round2[static_cast<std::size_t>(place)] = 0;
                    else
                        round2[static_cast<std::size_t>(place)] = others[k++];
                }
                basics.emplace_back(round1, round2);
            } while (std::next_permutation(others.begin(), others.end()));
        } while (std::next_permutation(arrangement.begin(), arrangement.end()));

        // orbit representatives under permutations of the rival roles
        std::vector<int> perm = rivals;
        std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
        std::vector<std::pair<std::vector<int>, std::vector<int>>> reps;
        std::map<std::pair<std::vector<int>, std::vector<int>>, Int> orbit_size;
        for (const auto& basic : basics) {
            std::pair<std::vector<int>, std::vector<int>> canon = basic;
            std::sort(perm.begin(), perm.end());
            do {
                auto mapped = basic;
                auto apply = [&](std::vector<int>& v) {
                    for (int& x : v)
                        if (x != 0)
                            x = perm[static_cast<std::size_t>(x - 1)];
                };
                apply(mapped.first);
                apply(mapped.second);
                canon = std::min(canon, mapped);
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (!seen.insert(canon).second) {
                orbit_size[canon] += 1;
                continue;
            }
            orbit_size[canon] = 1;
            reps.push_back(canon);
        }

        for (const auto& rep : reps) {
            EventBuilder b{ps, e.relabel, {}};
            b.condorcet_winner(0);
            for (int i = 0; i + 1 < n; ++i)
                b.outscores(e.rule, rep.first[static_cast<std::size_t>(i)],
                            rep.first[static_cast<std::size_t>(i + 1)], full_mask(ps));
            unsigned survivors = full_mask(ps);
            {
                unsigned out_mask = 0;
                for (int r = 0; r < n; ++r)
                    if (r == rep.first.back())
                        out_mask = 1u << r;
                survivors &= ~out_mask;
            }
            for (int i = 0; i + 2 < n; ++i)
                b.outscores(e.rule, rep.second[static_cast<std::size_t>(i)],
                            rep.second[static_cast<std::size_t>(i + 1)], survivors);
            std::string label = "round1=";
            for (int x : rep.first)
                label += static_cast<char>('A' + x);
            label += ",round2=";
            for (int x : rep.second)
                label += static_cast<char>('A' + x);
            out.push_back(EventComponent{label, b.finish(), orbit_size[rep]});
        }
        VotingEvent cw = e;
        cw.kind = VotingEvent::Kind::condorcet_winner;
        single(cw, "condorcet-winner", 0);
        return out;
    }
    case VotingEvent::Kind::elimination_efficiency: {
        VotingEvent cw = e;
        cw.kind = VotingEvent::Kind::condorcet_winner;
        single(cw, "condorcet-winner", 0);
        VotingEvent rev = e;
        rev.kind = VotingEvent::Kind::reverse_strong_borda;
        single(rev, "out-in-round-1", 1);
        VotingEvent f = e;
        f.kind = VotingEvent::Kind::elimination_f;
        single(f, "out-in-round-2", Int(n - 1));
        return out;
    }
    case VotingEvent::Kind::strong_borda:
    case VotingEvent::Kind::reverse_strong_borda:
    case VotingEvent::Kind::elimination_f: {
        single(e, event_name(e), 1);
        VotingEvent cw = e;
        cw.kind = VotingEvent::Kind::condorcet_winner;
        single(cw, "condorcet-winner", 0);
        return out;
    }
    default:
        single(e, event_name(e), 1);
        return out;
    }
}

namespace {

ComponentReport measure(const ConstraintSystem& cs, const std::string& label,
                        const Int& multiplicity, const VoteOptions& opts)
{
    ComponentReport rep;
    rep.label = label;
    rep.multiplicity = multiplicity;
    rep.input_inequalities = cs.inequalities.rows();
    rep.volume = 0;
    auto p = dual_convert(cs);
    if (!p)
        return rep; // empty polytope
    rep.dim = p->dim();
    rep.vertices = p->vertex_count();
    rep.support_hyperplanes = p->facet_count();
    if (p->dim() < p->full_dim())
        return rep; // beneath the expected dimension: measure-zero event
    if (opts.use_oracle) {
        rep.volume = oracle_volume_by_triangulation(*p, natural_vertex_order(*p));
    } else {
        VolumeResult r = descend(*p, DescentOptions{opts.threads, opts.rng_seed});
        rep.volume = r.lattice_volume;
        rep.stats = r.stats;
    }
    return rep;
}

} // namespace

ProbabilityReport probability(const VotingEvent& e, int n_candidates, const VoteOptions& opts)
{
    PreferenceSpace ps(n_candidates);
    const int n = n_candidates;
    ProbabilityReport report;
    report.event = event_name(e);
    report.candidates = n;

    auto components = build_event_components(ps, e);
    for (const auto& comp : components)
        report.components.push_back(measure(comp.system, comp.label, comp.multiplicity, opts));

    auto volume_of = [&](const std::string& label) -> const Rat& {
        for (const auto& c : report.components)
            if (c.label == label)
                return c.volume;
        throw std::logic_error("missing component " + label);
    };

    switch (e.kind) {
    case VotingEvent::Kind::four_rules_winner:
    case VotingEvent::Kind::condorcet_winner:
    case VotingEvent::Kind::condorcet_plurality:
        report.symmetry_factor = n;
        report.probability = Rat(n) * report.components[0].volume;
        break;
    case VotingEvent::Kind::other_paradox_q:
        report.symmetry_factor = 1;
        report.probability = report.components[0].volume;
        break;
    case VotingEvent::Kind::other_paradox: {
        report.symmetry_factor = Int(n) * (n - 1);
        Rat direct = 0;
        for (const auto& c : report.components)
            if (c.multiplicity > 0)
                direct += Rat(c.multiplicity) * c.volume;
        report.probability = direct;
        report.has_alternate = true;
        report.alternate_probability =
            Rat(n) * (volume_of("condorcet-plurality") - volume_of("q1"));
        break;
    }
    case VotingEvent::Kind::strong_borda:
    case VotingEvent::Kind::reverse_strong_borda:
    case VotingEvent::Kind::elimination_f: {
        // conditional on the existence of a Condorcet winner (or loser,
        // which has the same volume under order reversal)
        const Rat& p_cw = volume_of("condorcet-winner");
        report.symmetry_factor = 1;
        report.probability = report.components[0].volume / p_cw;
        break;
    }
    case VotingEvent::Kind::elimination_cell: {
        const Rat& p_cw = volume_of("condorcet-winner");
        Rat sum = 0;
        for (const auto& c : report.components)
            if (c.multiplicity > 0)
                sum += Rat(c.multiplicity) * c.volume;
        report.symmetry_factor = 1;
        report.probability = sum / p_cw;
        break;
    }
    case VotingEvent::Kind::elimination_efficiency: {
        const Rat& p_cw = volume_of("condorcet-winner");
        report.symmetry_factor = 1;
        report.probability = (p_cw - volume_of("out-in-round-1") -
                              Rat(n - 1) * volume_of("out-in-round-2")) /
                             p_cw;
        break;
    }
    case VotingEvent::Kind::strict_borda:
        report.symmetry_factor = factorial(n);
        report.probability = Rat(factorial(n)) * report.components[0].volume;
        break;
    }
    return report;
}

} // namespace latvol
