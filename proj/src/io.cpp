#include "latvol/io.hpp"

#include "latvol/special.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

namespace latvol {

namespace {

struct Tokenizer {
    explicit Tokenizer(std::istream& in) : in_(in) {}

    // next token, skipping blanks and '#' comments
    std::optional<std::string> next()
    {
        while (true) {
            if (pos_ >= line_.size()) {
                if (!std::getline(in_, line_))
                    return std::nullopt;
                ++line_number_;
                pos_ = 0;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(line_[pos_]))) {
                ++pos_;
                continue;
            }
            if (line_[pos_] == '#') {
                pos_ = line_.size();
                continue;
            }
            std::size_t start = pos_;
            while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) &&
                   line_[pos_] != '#')
                ++pos_;
            return line_.substr(start, pos_ - start);
        }
    }

    int line() const { return line_number_; }

private:
    std::istream& in_;
    std::string line_;
    std::size_t pos_ = 0;
    int line_number_ = 0;
};

Int parse_int_token(const std::string& tok, int line)
{
    try {
        return Int(tok);
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    }
}

Rat parse_rat_token(const std::string& tok, int line)
{
    try {
        const std::size_t slash = tok.find('/');
        if (slash == std::string::npos)
            return Rat(Int(tok));
        Int num(tok.substr(0, slash));
        Int den(tok.substr(slash + 1));
        if (den == 0)
            throw ParseError(line, "zero denominator");
        return Rat(num) / Rat(den);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a rational number, got '" + tok + "'");
    }
}

long parse_count(Tokenizer& t, const std::string& what)
{
    auto tok = t.next();
    if (!tok)
        throw ParseError(t.line(), "missing count after '" + what + "'");
    try {
        long n = std::stol(*tok);
        if (n < 0)
            throw ParseError(t.line(), "negative count for '" + what + "'");
        return n;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(t.line(), "expected a count after '" + what + "', got '" + *tok + "'");
    }
}

} // namespace

PolytopeInput parse_polytope_input(std::istream& in)
{
    Tokenizer t(in);
    long amb = -1;
    std::vector<std::vector<Int>> ineqs, eqs;
    std::vector<std::vector<Rat>> verts;
    std::optional<std::vector<Int>> grading;
    bool total_degree = false;

    auto need_amb = [&](const std::string& kw) {
        if (amb < 0)
            throw ParseError(t.line(), "'" + kw + "' before amb_space");
    };
    auto read_int_rows = [&](long rows, long cols, std::vector<std::vector<Int>>& out,
                             const std::string& kw) {
        for (long i = 0; i < rows; ++i) {
            std::vector<Int> row;
            for (long j = 0; j < cols; ++j) {
                auto tok = t.next();
                if (!tok)
                    throw ParseError(t.line(), "unexpected end of file in '" + kw + "' block");
                row.push_back(parse_int_token(*tok, t.line()));
            }
            out.push_back(std::move(row));
        }
    };

    while (auto tok = t.next()) {
        const std::string& kw = *tok;
        if (kw == "amb_space") {
            if (amb >= 0)
                throw ParseError(t.line(), "duplicate amb_space");
            amb = parse_count(t, kw);
            if (amb == 0)
                throw ParseError(t.line(), "ambient dimension must be positive");
        } else if (kw == "inequalities") {
            need_amb(kw);
            read_int_rows(parse_count(t, kw), amb, ineqs, kw);
        } else if (kw == "equations") {
            need_amb(kw);
            read_int_rows(parse_count(t, kw), amb, eqs, kw);
        } else if (kw == "grading") {
            need_amb(kw);
            std::vector<std::vector<Int>> row;
            read_int_rows(1, amb, row, kw);
            grading = std::move(row[0]);
        } else if (kw == "total_degree") {
            need_amb(kw);
            total_degree = true;
        } else if (kw == "vertices") {
            need_amb(kw);
            long rows = parse_count(t, kw);
            for (long i = 0; i < rows; ++i) {
                std::vector<Rat> row;
                for (long j = 0; j < amb + 1; ++j) {
                    auto v = t.next();
                    if (!v)
                        throw ParseError(t.line(), "unexpected end of file in 'vertices' block");
                    row.push_back(parse_rat_token(*v, t.line()));
                }
                if (row.back() <= 0)
                    throw ParseError(t.line(), "vertex denominator must be positive");
                verts.push_back(std::move(row));
            }
        } else {
            throw ParseError(t.line(), "unknown keyword '" + kw + "'");
        }
    }

    if (amb < 0)
        throw ParseError(t.line(), "missing amb_space");
    const bool has_h = !ineqs.empty() || !eqs.empty();
    const bool has_v = !verts.empty();
    if (has_h == has_v)
        throw ParseError(t.line(),
                         "exactly one of {inequalities/equations, vertices} is required");

    PolytopeInput input;
    if (has_v) {
        if (grading || total_degree)
            throw ParseError(t.line(), "vertex input carries its own grading");
        RatMatrix m(static_cast<Eigen::Index>(verts.size()), amb);
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (long j = 0; j < amb; ++j)
                m(static_cast<Eigen::Index>(i), j) =
                    verts[i][static_cast<std::size_t>(j)] / verts[i].back();
        input.vertex_rows = std::move(m);
        return input;
    }

    if (!grading && !total_degree)
        throw ParseError(t.line(), "constraint input requires grading or total_degree");
    ConstraintSystem cs;
    cs.ambient_dim = amb;
    cs.inequalities = IntMatrix(static_cast<Eigen::Index>(ineqs.size()), amb);
    for (std::size_t i = 0; i < ineqs.size(); ++i)
        for (long j = 0; j < amb; ++j)
            cs.inequalities(static_cast<Eigen::Index>(i), j) = ineqs[i][static_cast<std::size_t>(j)];
    cs.equations = IntMatrix(static_cast<Eigen::Index>(eqs.size()), amb);
    for (std::size_t i = 0; i < eqs.size(); ++i)
        for (long j = 0; j < amb; ++j)
            cs.equations(static_cast<Eigen::Index>(i), j) = eqs[i][static_cast<std::size_t>(j)];
    cs.grading = IntVector::Constant(amb, 1);
    if (grading)
        for (long j = 0; j < amb; ++j)
            cs.grading(j) = (*grading)[static_cast<std::size_t>(j)];
    input.system = std::move(cs);
    return input;
}

PolytopeInput parse_polytope_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    return parse_polytope_input(in);
}

VolumeReport run_volume(const PolytopeInput& input, const RunConfig& config)
{
    std::optional<HomogenizedPolytope> p;
    if (input.system)
        p = dual_convert(*input.system);
    else if (input.vertex_rows)
        p = dual_convert(*input.vertex_rows);
    else
        throw std::invalid_argument("no polytope description");

    VolumeReport rep;
    if (!p) {
        rep.empty = true;
        rep.cone_volume = 0;
        rep.lattice_volume = 0;
        rep.grading_denominator = 1;
        if (input.system)
            rep.ambient = input.system->ambient_dim;
        return rep;
    }

    rep.dim = p->dim();
    rep.expected_dim = p->full_dim();
    rep.ambient = p->original_ambient();
    rep.vertices = p->vertex_count();
    rep.support_hyperplanes = p->facet_count();
    rep.grading_denominator = p->grading_denominator();
    rep.euclidean_gram_det = p->euclidean_gram_det();

    RunConfig::Backend backend = config.backend;
    if (backend == RunConfig::Backend::special_auto) {
        SpecialShape shape = recognize_special(*p);
        switch (shape.kind) {
        case SpecialShape::Kind::simplex: {
            std::vector<Eigen::Index> idx(static_cast<std::size_t>(p->vertex_count()));
            std::iota(idx.begin(), idx.end(), Eigen::Index(0));
            rep.cone_volume = simplex_volume(*p, idx);
            rep.backend_used = "special:simplex";
            break;
        }
        case SpecialShape::Kind::parallelotope:
            rep.cone_volume = parallelotope_volume(*p, shape);
            rep.backend_used = "special:parallelotope";
            break;
        case SpecialShape::Kind::cross_polytope:
            rep.cone_volume = cross_polytope_volume(*p, shape);
            rep.backend_used = "special:cross-polytope";
            break;
        case SpecialShape::Kind::none:
            backend = RunConfig::Backend::descent;
            break;
        }
    }
    if (backend == RunConfig::Backend::descent) {
        VolumeResult r = descend(*p, DescentOptions{config.threads, config.rng_seed});
        rep.cone_volume = r.cone_volume;
        rep.stats = r.stats;
        rep.has_stats = true;
        rep.backend_used = "descent";
    } else if (backend == RunConfig::Backend::oracle) {
        Rat lattice = oracle_volume_by_triangulation(*p, natural_vertex_order(*p));
        rep.cone_volume = lattice / Rat(p->grading_denominator());
        rep.backend_used = "oracle";
    }

    rep.lattice_volume = rep.cone_volume * Rat(rep.grading_denominator);
    if (config.scale == RunConfig::Scale::kP)
        rep.lattice_volume *= Rat(int_pow(rep.grading_denominator, rep.dim));
    return rep;
}

namespace {

std::string fraction(const Rat& q)
{
    return numerator(q).str() + "/" + denominator(q).str();
}

nlohmann::json fraction_json(const Rat& q)
{
    return {{"num", numerator(q).str()}, {"den", denominator(q).str()}};
}

std::string euclidean_decimal(const Rat& lattice, int dim, const Int& gram, int precision)
{
    if (dim <= 0)
        return decimal_string(lattice, precision);
    Rat scaled = lattice / Rat(factorial(dim));
    if (gram == 1)
        return decimal_string(scaled, precision);
    return decimal_string_sqrt(scaled, gram, precision);
}

nlohmann::json stats_json(const DescentStats& s)
{
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& x : s.layer_sizes)
        layers.push_back(x.str());
    return {{"descent_faces", s.total_faces.str()},
            {"determinants", s.det_count.str()},
            {"flag_simplices", s.flag_decompositions.str()},
            {"layer_sizes", layers}};
}

} // namespace

std::string render_volume_text(const VolumeReport& rep, const RunConfig& config)
{
    std::ostringstream out;
    if (rep.empty) {
        out << "polytope is empty\n";
        out << "dim            -1\n";
        out << "lattice volume 0\n";
        return out.str();
    }
    out << "dim            " << rep.dim;
    if (rep.dim < rep.expected_dim)
        out << "   (below the expected " << rep.expected_dim << ": degenerate slice)";
    out << "\n";
    out << "vertices       " << rep.vertices << "\n";
    out << "support hyps   " << rep.support_hyperplanes << "\n";
    out << "grading denom  " << rep.grading_denominator.str() << "\n";
    out << "backend        " << rep.backend_used << "\n";
    if (config.raw_cone_volume)
        out << "cone volume    " << fraction(rep.cone_volume) << "\n";
    out << "lattice volume " << fraction(rep.lattice_volume) << " ("
        << (config.scale == RunConfig::Scale::kP ? "volume of kP" : "volume of P") << ")\n";
    out << "               ~ " << decimal_string(rep.lattice_volume, config.precision) << "\n";
    out << "euclid volume  ~ "
        << euclidean_decimal(rep.lattice_volume, rep.dim, rep.euclidean_gram_det,
                             config.precision)
        << "\n";
    if (config.stats && rep.has_stats) {
        out << "faces stored   " << rep.stats.total_faces.str() << "\n";
        out << "determinants   " << rep.stats.det_count.str() << "\n";
        out << "flag simplices " << rep.stats.flag_decompositions.str() << "\n";
        out << "layer sizes   ";
        for (const auto& s : rep.stats.layer_sizes)
            out << " " << s.str();
        out << "\n";
    }
    return out.str();
}

std::string render_volume_json(const VolumeReport& rep, const RunConfig& config)
{
    nlohmann::json j;
    j["empty"] = rep.empty;
    j["dim"] = rep.empty ? -1 : rep.dim;
    if (!rep.empty) {
        j["expected_dim"] = static_cast<long>(rep.expected_dim);
        j["vertices"] = static_cast<long>(rep.vertices);
        j["support_hyperplanes"] = static_cast<long>(rep.support_hyperplanes);
        j["grading_denominator"] = rep.grading_denominator.str();
        j["backend"] = rep.backend_used;
        j["cone_volume"] = fraction_json(rep.cone_volume);
        j["lattice_volume"] = fraction_json(rep.lattice_volume);
        j["lattice_volume_decimal"] = decimal_string(rep.lattice_volume, config.precision);
        j["euclidean_volume_decimal"] = euclidean_decimal(
            rep.lattice_volume, rep.dim, rep.euclidean_gram_det, config.precision);
        j["euclidean_gram_det"] = rep.euclidean_gram_det.str();
        j["scale"] = config.scale == RunConfig::Scale::kP ? "kP" : "P";
        if (config.stats && rep.has_stats)
            j["stats"] = stats_json(rep.stats);
    } else {
        j["lattice_volume"] = fraction_json(Rat(0));
    }
    return j.dump(2) + "\n";
}

std::string render_vote_text(const ProbabilityReport& rep, const RunConfig& config)
{
    std::ostringstream out;
    out << "event          " << rep.event << "\n";
    out << "candidates     " << rep.candidates << "\n";
    for (const auto& c : rep.components) {
        out << "  polytope " << c.label << ": volume " << fraction(c.volume);
        if (c.multiplicity > 1)
            out << " (x" << c.multiplicity.str() << ")";
        out << ", dim " << c.dim << ", vertices " << c.vertices << ", supp "
            << c.support_hyperplanes << ", inequalities " << c.input_inequalities << "\n";
    }
    if (rep.symmetry_factor != 1)
        out << "symmetry       " << rep.symmetry_factor.str() << "\n";
    out << "probability    " << fraction(rep.probability) << "\n";
    out << "               ~ " << decimal_string(rep.probability, config.precision) << "\n";
    if (rep.has_alternate) {
        out << "cross-check    " << fraction(rep.alternate_probability) << " ("
            << (rep.alternate_probability == rep.probability ? "agrees" : "DISAGREES") << ")\n";
    }
    return out.str();
}

std::string render_vote_json(const ProbabilityReport& rep, const RunConfig& config)
{
    nlohmann::json j;
    j["event"] = rep.event;
    j["candidates"] = rep.candidates;
    j["symmetry_factor"] = rep.symmetry_factor.str();
    j["probability"] = fraction_json(rep.probability);
    j["probability_decimal"] = decimal_string(rep.probability, config.precision);
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : rep.components) {
        nlohmann::json cj;
        cj["label"] = c.label;
        cj["multiplicity"] = c.multiplicity.str();
        cj["volume"] = fraction_json(c.volume);
        cj["dim"] = c.dim;
        cj["vertices"] = static_cast<long>(c.vertices);
        cj["support_hyperplanes"] = static_cast<long>(c.support_hyperplanes);
        cj["inequalities"] = static_cast<long>(c.input_inequalities);
        comps.push_back(std::move(cj));
    }
    j["components"] = std::move(comps);
    if (rep.has_alternate) {
        j["alternate_probability"] = fraction_json(rep.alternate_probability);
        j["routes_agree"] = rep.alternate_probability == rep.probability;
    }
    return j.dump(2) + "\n";
}

Rat parse_rat(const std::string& num, const std::string& den)
{
    return Rat(Int(num)) / Rat(Int(den));
}

} // namespace latvol
