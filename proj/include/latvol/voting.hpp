#ifndef LATVOL_VOTING_HPP
#define LATVOL_VOTING_HPP

#include "latvol/descent.hpp"
#include "latvol/polytope.hpp"

#include <string>
#include <vector>

namespace latvol {

/// The N = n! linear preference orders of an n-candidate election,
/// canonically indexed: order i is the i-th permutation of (0,...,n-1) in
/// lexicographic order, listing candidates from most to least preferred.
/// Coordinate i of an election outcome is the share of voters with order i.
struct PreferenceSpace {
    explicit PreferenceSpace(int n_candidates);

    int candidates = 0;
    int order_count = 0;
    std::vector<std::vector<int>> orders; // orders[i][pos] = candidate

    int position(int order, int candidate) const;
    bool prefers(int order, int x, int y) const;
    /// Most / least preferred candidate among the alive set (bitmask).
    int top_among(int order, unsigned alive_mask) const;
    int bottom_among(int order, unsigned alive_mask) const;
};

enum class Rule { plurality, negative_plurality, borda };

/// Scoring form of a rule on R^N restricted to the alive candidates: voters'
/// orders collapse onto the survivors. Plurality scores +1 per top place,
/// negative plurality -1 per bottom place (maximizing = fewest last places),
/// Borda n-1,...,0 points by position (full field only).
IntVector score_form(const PreferenceSpace& ps, Rule rule, int candidate, unsigned alive_mask);

/// +1 on orders preferring x to y, -1 otherwise; x beats y iff the form is
/// positive at the outcome.
IntVector pairwise_form(const PreferenceSpace& ps, int x, int y);

struct VotingEvent {
    enum class Kind {
        four_rules_winner,    // one candidate wins PR, NPR, Borda and pairwise majority
        condorcet_winner,     // candidate A beats everyone pairwise
        condorcet_plurality,  // A is both Condorcet and plurality winner
        other_paradox,        // A is CW and PW but not the Borda winner (composite)
        other_paradox_q,      // single polytope of the family: A at Borda position `position`
        strong_borda,         // the Condorcet loser wins the scoring rule
        reverse_strong_borda, // the Condorcet winner is last in the scoring rule
        elimination_f,        // A CW, last candidate out in round 1, A out in round 2
        elimination_cell,     // A CW with places (row, col) in rounds 1 and 2 (composite)
        elimination_efficiency, // conditional probability that the CW survives elimination
        strict_borda          // scoring ranking is the exact reverse of the majority ranking
    };
    Kind kind = Kind::condorcet_winner;
    Rule rule = Rule::plurality;
    int position = 1; // other_paradox_q: Borda position of A, 1-based
    int row = 1;      // elimination_cell: place in round 1, 1-based
    int col = 1;      // elimination_cell: place in round 2, 1-based
    std::vector<int> relabel; // optional candidate relabeling (size n)
};

std::string event_name(const VotingEvent& e);

/// Single-polytope compilation: sign inequalities, the rule inequalities of
/// the event, and the full-simplex grading sum(x) = 1. Throws for composite
/// kinds (other_paradox, elimination_cell, elimination_efficiency).
ConstraintSystem build_event(const PreferenceSpace& ps, const VotingEvent& e);

/// One polytope of a composite event, with its multiplicity in the
/// probability formula.
struct EventComponent {
    std::string label;
    ConstraintSystem system;
    Int multiplicity;
};
std::vector<EventComponent> build_event_components(const PreferenceSpace& ps,
                                                   const VotingEvent& e);

struct ComponentReport {
    std::string label;
    Int multiplicity;
    Rat volume; // exact lattice volume; 0 when the polytope misses full dimension
    int dim = -1;
    Eigen::Index vertices = 0;
    Eigen::Index support_hyperplanes = 0;
    Eigen::Index input_inequalities = 0;
    DescentStats stats;
};

struct ProbabilityReport {
    std::string event;
    int candidates = 0;
    std::vector<ComponentReport> components;
    Int symmetry_factor = 1;
    Rat probability;
    bool has_alternate = false; // second route, when the event admits one
    Rat alternate_probability;
};

struct VoteOptions {
    int threads = 1;
    std::uint64_t rng_seed = 1;
    bool use_oracle = false; // pulling-triangulation backend (small cases)
};

/// Volumes of the event's polytopes combined with the symmetry factors of
/// the probability formulas. Conditional events (Borda paradoxes,
/// elimination) divide by the volume of the Condorcet-winner polytope,
/// which is computed on the fly.
ProbabilityReport probability(const VotingEvent& e, int n_candidates,
                              const VoteOptions& opts = {});

} // namespace latvol

#endif
