#include "classdeg/cli.hpp"

#include "classdeg/errors.hpp"
#include "classdeg/report.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace classdeg {

namespace {

struct Options {
    std::string triple_path;
    std::string measure_path;
    std::vector<std::string> y_tokens;
    std::vector<long long> interval;
    int horizon = 8;
    int window = 2;
    int k = 1;
    bool parry = false;
    bool image = false;
    bool plain = false;
    bool bits = false;
    bool strict = false;
    bool timing = false;
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string joined(const std::vector<std::string> &tokens) {
    std::string out;
    for (const auto &tok : tokens)
        out += (out.empty() ? "" : " ") + tok;
    return out;
}

class Session {
public:
    Session(const Options &opt, std::string command) : opt_(opt) {
        doc_["schema"] = kSchema;
        doc_["command"] = std::move(command);
        doc_["inputs"] = Json::array();
    }

    FactorTriple triple() {
        auto text = slurp(opt_.triple_path);
        note_input(opt_.triple_path, text);
        return parse_triple(text);
    }

    MeasureTable measure() {
        auto text = slurp(opt_.measure_path);
        note_input(opt_.measure_path, text);
        return parse_measure(text);
    }

    double nats(double value) const { return opt_.bits ? value / std::log(2.0) : value; }

    Json &doc() { return doc_; }

    void emit(std::ostream &out, std::chrono::steady_clock::time_point started) {
        if (opt_.timing) {
            auto elapsed = std::chrono::steady_clock::now() - started;
            doc_["timing_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
        }
        if (opt_.plain)
            out << render_plain(doc_);
        else
            out << doc_.dump(2) << '\n';
    }

private:
    void note_input(const std::string &path, const std::string &text) {
        doc_["inputs"].push_back(Json{{"file", path}, {"digest", digest_hex(text)}});
    }

    const Options &opt_;
    Json doc_;
};

PeriodicPoint y_point(const FactorTriple &t, const Options &opt) {
    if (opt.y_tokens.empty())
        throw InputError("--y is required");
    return PeriodicPoint(t.parse_y_word(joined(opt.y_tokens)));
}

int dispatch(const std::string &name, const Options &opt, std::ostream &out) {
    auto started = std::chrono::steady_clock::now();
    Session s(opt, name);
    Json &doc = s.doc();
    int code = 0;

    if (name == "recode") {
        auto t = s.triple();
        out << write_triple(higher_block(t, opt.window).triple);
        return 0;
    }

    auto t = s.triple();
    Json result;
    if (name == "check") {
        auto diamond = find_diamond(t);
        auto irr = image_irreducibility(t);
        result = Json{{"x_symbols", t.x_size()},
                      {"y_symbols", t.y_size()},
                      {"transitions", t.x().transition_count()},
                      {"x_irreducible", is_irreducible(t.x())},
                      {"image_irreducible", irr.irreducible},
                      {"finite_to_one", !diamond.has_value()},
                      {"d_star", magic_json(t, d_star(t))}};
        result["diamond"] = diamond ? Json::array({t.format_x(diamond->first), t.format_x(diamond->second)})
                                    : Json(nullptr);
    } else if (name == "degree") {
        auto d = degree(t, opt.strict);
        result = Json{{"value", d.value}, {"witness", magic_json(t, d.witness)}, {"strict", opt.strict}};
    } else if (name == "classdegree") {
        DepthSearchResult r = opt.measure_path.empty()
                                  ? find_minimal_transition_block(t, opt.horizon)
                                  : class_count_for_measure(t, measure_on_image(t, s.measure()), opt.horizon);
        result = depth_search_json(t, r);
        int bound = t.x_size();
        for (Symbol c = 0; c < t.y_size(); ++c)
            bound = std::min(bound, static_cast<int>(t.preimage(c).count()));
        result["symbol_bound"] = bound;
        doc["certified"] = r.certified;
        code = r.certified ? 0 : 3;
    } else if (name == "fiber") {
        auto report = transition_classes(t, y_point(t, opt));
        result = class_report_json(t, report);
        doc["certified"] = report.stable;
    } else if (name == "sync") {
        if (opt.interval.size() != 2)
            throw InputError("--interval takes two integers");
        auto sync = synchronizing_extension(t, y_point(t, opt), opt.interval[0], opt.interval[1]);
        result = sync_json(t, sync);
    } else if (name == "extract") {
        result = extraction_json(t, extract_transition_block(t, y_point(t, opt)));
    } else if (name == "entropy") {
        if (opt.parry == !opt.measure_path.empty())
            throw InputError("entropy needs exactly one of --parry and --measure");
        if (opt.parry) {
            auto m = parry_measure(t.x());
            result = Json{{"measure", "parry"}, {"entropy", s.nats(entropy_rate(m))},
                          {"topological_entropy", s.nats(topological_entropy(t.x()))}};
        } else if (opt.image) {
            auto nu = measure_on_image(t, s.measure());
            result = Json{{"measure", "image"}, {"entropy", s.nats(entropy_rate(nu))}, {"pqs_bound", pqs_bound(t, nu)}};
        } else {
            auto m = measure_on_x(t.x(), s.measure());
            result = Json{{"measure", "x"}, {"entropy", s.nats(entropy_rate(m))}};
        }
        result["unit"] = opt.bits ? "bits" : "nats";
    } else if (name == "bound") {
        if (opt.measure_path.empty())
            throw InputError("bound needs --measure");
        auto nu = measure_on_image(t, s.measure());
        auto b = relative_entropy_upper_bound(t, nu, opt.k);
        Json sequence = Json::array();
        for (double v : b.sequence)
            sequence.push_back(s.nats(v));
        result = Json{{"k", b.k},
                      {"value", s.nats(b.value)},
                      {"primal_value", s.nats(b.primal_value)},
                      {"residual", b.residual},
                      {"iterations", b.iterations},
                      {"sequence", sequence},
                      {"image_entropy", s.nats(entropy_rate(nu))},
                      {"uniform_deviation", uniform_conditional_diagnostic(t, b)},
                      {"pqs_bound", pqs_bound(t, nu)},
                      {"unit", opt.bits ? "bits" : "nats"}};
    }
    doc["result"] = result;
    s.emit(out, started);
    return code;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Degree, class degree and transition classes of 1-block factor codes", "classdeg"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("triple", opt.triple_path, "Triple file")->required();
        sub->add_flag("--plain", opt.plain, "Tab-separated output instead of JSON");
        sub->add_flag("--timing", opt.timing, "Include wall-clock time in the report");
    };
    auto add_y = [&](CLI::App *sub) {
        sub->add_option("--y", opt.y_tokens, "Periodic word as Y-symbols")->required()->expected(1, -1);
    };

    auto *check = app.add_subcommand("check", "Irreducibility, finite-to-one test and d*");
    add_common(check);
    auto *deg = app.add_subcommand("degree", "Degree of a finite-to-one code");
    add_common(deg);
    deg->add_flag("--strict", opt.strict, "Also require an irreducible X");
    auto *cls = app.add_subcommand("classdegree", "Minimal transition block search");
    add_common(cls);
    cls->add_option("--horizon", opt.horizon, "Longest block searched")->check(CLI::Range(3, 64));
    cls->add_option("--measure", opt.measure_path, "Restrict to blocks of positive measure");
    auto *fib = app.add_subcommand("fiber", "Transition classes over a periodic point");
    add_common(fib);
    add_y(fib);
    auto *syn = app.add_subcommand("sync", "Synchronizing extension of a window of y");
    add_common(syn);
    add_y(syn);
    syn->add_option("--interval", opt.interval, "Window [m, n]")->required()->expected(2);
    auto *ext = app.add_subcommand("extract", "Transition block of depth |C(y)| from the fiber of y");
    add_common(ext);
    add_y(ext);
    auto *rec = app.add_subcommand("recode", "Print the N-block recoding as a triple file");
    add_common(rec);
    rec->add_option("--n", opt.window, "Window length")->required()->check(CLI::Range(1, 16));
    auto *ent = app.add_subcommand("entropy", "Entropy of the Parry measure or a Markov measure");
    add_common(ent);
    ent->add_flag("--parry", opt.parry, "Use the Parry measure of X");
    ent->add_option("--measure", opt.measure_path, "Markov measure file");
    ent->add_flag("--image", opt.image, "The measure lives on the Y alphabet");
    ent->add_flag("--bits", opt.bits, "Report in bits");
    auto *bnd = app.add_subcommand("bound", "Upper bound on the entropy of measures over ν");
    add_common(bnd);
    bnd->add_option("--measure", opt.measure_path, "Markov measure on the Y alphabet")->required();
    bnd->add_option("--k", opt.k, "Block order")->required()->check(CLI::Range(1, 12));
    bnd->add_flag("--bits", opt.bits, "Report in bits");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), opt, out);
    } catch (const PreconditionError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace classdeg
