#ifndef LATVOL_IO_HPP
#define LATVOL_IO_HPP

#include "latvol/descent.hpp"
#include "latvol/polytope.hpp"
#include "latvol/voting.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace latvol {

struct ParseError : std::runtime_error {
    ParseError(int line_number, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number)
    {
    }
    int line;
};

/// Polytope input file. Blocks, in any order, one of the two descriptions:
///
///   amb_space n
///   inequalities r      followed by r rows of n integers  (forms >= 0)
///   equations s         followed by s rows of n integers  (forms == 0)
///   grading             followed by 1 row of n integers   (delta, level 1)
///   total_degree        shorthand for grading 1 1 ... 1
///   vertices m          followed by m rows of n+1 rationals; a row lists
///                       the numerators and a trailing denominator
///
/// '#' starts a comment. Inequalities/equations require a grading; vertex
/// input carries its own homogenizing coordinate and takes neither grading
/// nor constraint blocks.
struct PolytopeInput {
    std::optional<ConstraintSystem> system;
    std::optional<RatMatrix> vertex_rows;
};

PolytopeInput parse_polytope_input(std::istream& in);
PolytopeInput parse_polytope_file(const std::string& path);

struct RunConfig {
    enum class Backend { descent, oracle, special_auto };
    enum class Scale { P, kP };
    Backend backend = Backend::descent;
    Scale scale = Scale::P;
    int threads = 1;
    int precision = 12;
    bool stats = false;
    bool json = false;
    bool raw_cone_volume = false;
    std::uint64_t rng_seed = 1;
};

struct VolumeReport {
    bool empty = false;
    int dim = -1;
    Eigen::Index expected_dim = -1;
    Eigen::Index ambient = 0;
    Eigen::Index vertices = 0;
    Eigen::Index support_hyperplanes = 0;
    Rat cone_volume;
    Rat lattice_volume; // after the grading-denominator scaling of the config
    Int grading_denominator;
    Int euclidean_gram_det = 1;
    std::string backend_used;
    DescentStats stats;
    bool has_stats = false;
};

/// Convert + volume with the configured backend. Throws GradingError /
/// OracleBoundError like the underlying layers.
VolumeReport run_volume(const PolytopeInput& input, const RunConfig& config);

std::string render_volume_text(const VolumeReport& report, const RunConfig& config);
std::string render_volume_json(const VolumeReport& report, const RunConfig& config);

std::string render_vote_text(const ProbabilityReport& report, const RunConfig& config);
std::string render_vote_json(const ProbabilityReport& report, const RunConfig& config);

/// {"num": "...", "den": "..."} decimal strings; parse_rat is the inverse.
Rat parse_rat(const std::string& num, const std::string& den);

} // namespace latvol

#endif
