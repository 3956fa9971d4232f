#include <CLI11.hpp>

#include "latvol/io.hpp"
#include "latvol/special.hpp"

#include <chrono>
#include <iostream>
#include <numeric>

using namespace latvol;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse = 2;
constexpr int exit_empty = 3;
constexpr int exit_bound = 4;

VotingEvent::Kind event_kind_from_name(const std::string& name)
{
    using K = VotingEvent::Kind;
    if (name == "four-rules")
        return K::four_rules_winner;
    if (name == "condorcet-winner")
        return K::condorcet_winner;
    if (name == "condorcet-plurality")
        return K::condorcet_plurality;
    if (name == "other-paradox")
        return K::other_paradox;
    if (name == "other-paradox-q")
        return K::other_paradox_q;
    if (name == "strong-borda")
        return K::strong_borda;
    if (name == "reverse-strong-borda")
        return K::reverse_strong_borda;
    if (name == "elimination")
        return K::elimination_f;
    if (name == "elimination-cell")
        return K::elimination_cell;
    if (name == "elimination-efficiency")
        return K::elimination_efficiency;
    if (name == "strict-borda")
        return K::strict_borda;
    throw CLI::ValidationError("--event", "unknown event '" + name + "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"latvol: exact lattice-normalized volumes of rational polytopes by descent "
                 "in the face lattice"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string backend = "descent";
    std::string scale = "P";

    std::string file;
    auto* vol = app.add_subcommand("volume", "volume of a polytope read from a file");
    vol->add_option("file", file, "input file (see README for the format)")->required();
    vol->add_option("--backend", backend, "descent | oracle | special-auto")
        ->check(CLI::IsMember({"descent", "oracle", "special-auto"}));
    vol->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    vol->add_option("--precision", cfg.precision, "decimal digits for approximations")
        ->check(CLI::PositiveNumber);
    vol->add_flag("--stats", cfg.stats, "print descent statistics");
    vol->add_flag("--json", cfg.json, "JSON output");
    vol->add_flag("--raw-cone-volume", cfg.raw_cone_volume, "also print Vol of conv(0,P)");
    vol->add_option("--scale", scale, "P (default) or kP: which dilation the volume refers to")
        ->check(CLI::IsMember({"P", "kP"}));
    vol->add_option("--seed", cfg.rng_seed, "seed for the randomized lattice-basis selection");

    int candidates = 4;
    std::string event_name_opt;
    std::string winner = "A";
    std::string rule = "plurality";
    int position = 1, row = 1, col = 1;
    bool vote_oracle = false;
    auto* vote = app.add_subcommand("vote", "volumes and probabilities of voting events");
    vote->add_option("--candidates", candidates, "number of candidates (3 or 4)")
        ->check(CLI::Range(3, 4));
    vote->add_option("--event", event_name_opt,
                     "four-rules | condorcet-winner | condorcet-plurality | other-paradox | "
                     "other-paradox-q | strong-borda | reverse-strong-borda | elimination | "
                     "elimination-cell | elimination-efficiency | strict-borda")
        ->required();
    vote->add_option("--winner", winner, "distinguished candidate A..D");
    vote->add_option("--rule", rule, "plurality | negative-plurality")
        ->check(CLI::IsMember({"plurality", "negative-plurality"}));
    vote->add_option("--position", position, "Borda position for other-paradox-q (1-based)");
    vote->add_option("--row", row, "round-1 place for elimination-cell (1-based)");
    vote->add_option("--col", col, "round-2 place for elimination-cell (1-based)");
    vote->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    vote->add_option("--precision", cfg.precision, "decimal digits for approximations")
        ->check(CLI::PositiveNumber);
    vote->add_flag("--json", cfg.json, "JSON output");
    vote->add_flag("--oracle", vote_oracle, "pulling-triangulation backend (small cases only)");
    vote->add_option("--seed", cfg.rng_seed, "seed for the randomized lattice-basis selection");

    CLI11_PARSE(app, argc, argv);

    cfg.scale = scale == "kP" ? RunConfig::Scale::kP : RunConfig::Scale::P;
    cfg.backend = backend == "oracle"         ? RunConfig::Backend::oracle
                  : backend == "special-auto" ? RunConfig::Backend::special_auto
                                              : RunConfig::Backend::descent;

    try {
        if (vol->parsed()) {
            const auto start = std::chrono::steady_clock::now();
            PolytopeInput input = parse_polytope_file(file);
            VolumeReport rep = run_volume(input, cfg);
            const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start);
            std::cout << (cfg.json ? render_volume_json(rep, cfg) : render_volume_text(rep, cfg));
            if (!cfg.json)
                std::cerr << "elapsed " << elapsed.count() << " ms\n";
            return rep.empty ? exit_empty : exit_ok;
        }

        VotingEvent e;
        e.kind = event_kind_from_name(event_name_opt);
        e.rule = rule == "negative-plurality" ? Rule::negative_plurality : Rule::plurality;
        e.position = position;
        e.row = row;
        e.col = col;
        if (winner.size() != 1 || winner[0] < 'A' || winner[0] >= 'A' + candidates)
            throw CLI::ValidationError("--winner", "expected a candidate letter A.." +
                                                       std::string(1, 'A' + candidates - 1));
        if (winner[0] != 'A') {
            std::vector<int> relabel(static_cast<std::size_t>(candidates));
            std::iota(relabel.begin(), relabel.end(), 0);
            std::swap(relabel[0], relabel[static_cast<std::size_t>(winner[0] - 'A')]);
            e.relabel = std::move(relabel);
        }
        VoteOptions opts;
        opts.threads = cfg.threads;
        opts.rng_seed = cfg.rng_seed;
        opts.use_oracle = vote_oracle;
        const auto start = std::chrono::steady_clock::now();
        ProbabilityReport rep = probability(e, candidates, opts);
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        std::cout << (cfg.json ? render_vote_json(rep, cfg) : render_vote_text(rep, cfg));
        if (!cfg.json)
            std::cerr << "elapsed " << elapsed.count() << " ms\n";
        return exit_ok;
    } catch (const ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return exit_parse;
    } catch (const OracleBoundError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_bound;
    } catch (const GradingError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_parse;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_parse;
    }
}
