#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unistd.h>

#include "dsep/cli/commands.hpp"
#include "dsep/cli/config.hpp"
#include "dsep/cli/experiments.hpp"
#include "dsep/cli/waveform_csv.hpp"
#include "dsep/error.hpp"
#include "test_support.hpp"

using namespace dsep;
using namespace dsep::cli;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("dsep_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const ExperimentConfig& reference(const std::string& name) {
    static const std::vector<ExperimentConfig> all = reference_experiments();
    for (const ExperimentConfig& c : all)
        if (c.name == name) return c;
    FAIL("no reference experiment " << name);
    throw;
}

json minimal_config() {
    return json::parse(R"({
        "name": "t", "family": "dynamic",
        "scenario": {"connection": "grounded-wye", "fault": "LG-B",
                     "load": {"r": 18.432, "l": 0.024446, "rf": 0.001},
                     "rs": 19.2, "ls": 0.025465, "rg": 0.01}
    })");
}

ErrorCode parse_error_code(const json& doc) {
    try {
        parse_config(doc);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("config was accepted");
    throw;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("config parsing fills defaults and rejects bad documents") {
        const ExperimentConfig c = parse_config(minimal_config());
        CHECK(c.scenario.fault == FaultKind::line_ground(Phase::B));
        CHECK(c.scenario.t_end == 0.2);
        CHECK(c.noise.fraction == 0.0);
        CHECK(c.truth().name() == "GW-LG-B");

        json extra = minimal_config();
        extra["scenario"]["colour"] = "blue";
        CHECK(parse_error_code(extra) == ErrorCode::ParseError);

        json both = minimal_config();
        both["scenario"]["load"]["x"] = 9.2;
        CHECK(parse_error_code(both) == ErrorCode::ParseError);

        json conn = minimal_config();
        conn["scenario"]["connection"] = "star";
        CHECK(parse_error_code(conn) == ErrorCode::ParseError);

        json t_end = minimal_config();
        t_end["scenario"]["t_end"] = 0.0;
        CHECK(parse_error_code(t_end) == ErrorCode::InvalidScenario);

        json type = minimal_config();
        type["scenario"]["load"]["r"] = "big";
        CHECK(parse_error_code(type) == ErrorCode::ParseError);
    }

    TEST_CASE("config serialisation round-trips") {
        for (const ExperimentConfig& c : reference_experiments()) {
            CAPTURE(c.name);
            const ExperimentConfig back = parse_config(to_json(c));
            CHECK(back.scenario.load.r == c.scenario.load.r);
            CHECK(back.scenario.load.l == doctest::Approx(c.scenario.load.l).epsilon(1e-14));
            // phasor loads are written as reactance, so l passes through x = w l
            CHECK(to_json(parse_config(to_json(back))) == to_json(back));
            CHECK(back.truth() == c.truth());
        }
    }

    TEST_CASE("scenario files match the built-in experiments") {
        const fs::path dir = fs::path(DSEP_SOURCE_DIR) / "scenarios";
        const std::vector<ExperimentConfig> refs = reference_experiments();
        CHECK(refs.size() == 12);
        for (const ExperimentConfig& r : refs) {
            CAPTURE(r.name);
            const ExperimentConfig f = load_config(dir / (r.name + ".json"));
            CHECK(f.family == r.family);
            CHECK(f.truth() == r.truth());
            CHECK(f.scenario.load.r == doctest::Approx(r.scenario.load.r).epsilon(1e-6));
            CHECK(f.scenario.load.l == doctest::Approx(r.scenario.load.l).epsilon(1e-6));
            CHECK(f.scenario.load.rf.has_value() == r.scenario.load.rf.has_value());
            CHECK(f.noise.fraction == r.noise.fraction);
            CHECK(f.noise.seed == r.noise.seed);
            CHECK(f.scenario.t_fault == r.scenario.t_fault);
        }
    }

    TEST_CASE("waveform CSV round-trips exactly") {
        const SampledWindow w = noisy_record(reference("delta-lg"));
        std::stringstream s;
        write_waveform_csv(s, w);
        const SampledWindow back = read_waveform_csv(s);
        CHECK(back.size() == w.size());
        CHECK(back.dt() == doctest::Approx(w.dt()).epsilon(1e-12));
        for (const auto& [c, samples] : w.channels()) {
            const auto got = back.channel(c);
            for (std::size_t k = 0; k < samples.size(); ++k) REQUIRE(got[k] == samples[k]);
        }
    }

    TEST_CASE("malformed waveform CSV is rejected") {
        const auto code = [](const std::string& text) {
            std::istringstream in(text);
            try {
                read_waveform_csv(in);
            } catch (const Error& e) {
                return e.code();
            }
            FAIL("CSV was accepted");
            throw;
        };
        CHECK(code("t,v,i\n0,1,2\n0.001,1,2\n") == ErrorCode::ParseError);
        CHECK(code("t,v,q\n0,1,2\n0.001,1,2\n0.002,1,2\n") == ErrorCode::UnknownChannel);
        CHECK(code("v,i\n1,2\n1,2\n1,2\n") == ErrorCode::ParseError);
        CHECK(code("t,v,i\n0,1,2\n0.001,1\n0.002,1,2\n") == ErrorCode::ParseError);
        CHECK(code("t,v,i\n0,1,2\n0.001,x,2\n0.002,1,2\n") == ErrorCode::ParseError);
        CHECK(code("t,v,i\n0,1,2\n0.001,1,2\n0.003,1,2\n") == ErrorCode::ParseError);
        CHECK(code("t,v,v\n0,1,2\n0.001,1,2\n0.002,1,2\n") == ErrorCode::ParseError);
    }

    TEST_CASE("simulate writes the expected number of samples") {
        TempDir tmp;
        std::ostringstream out;
        std::ostringstream err;
        GlobalOptions g;
        g.out = (tmp.path() / "gwye.csv").string();
        CHECK(cmd_simulate(std::string(DSEP_SOURCE_DIR) + "/scenarios/gwye-lg.json", g, out, err) == kExitOk);
        CHECK(read_waveform_csv(tmp.path() / "gwye.csv").size() == 400);

        std::ostringstream sp;
        CHECK(cmd_simulate(std::string(DSEP_SOURCE_DIR) + "/scenarios/single-phase.json", {}, sp, err) == kExitOk);
        std::istringstream in(sp.str());
        CHECK(read_waveform_csv(in).size() == 100);
    }

    TEST_CASE("exit codes for bad inputs") {
        TempDir tmp;
        std::ostringstream out;
        std::ostringstream err;

        json bad = minimal_config();
        bad["scenario"]["t_end"] = 0.0;
        write(tmp.path() / "bad.json", bad.dump());
        CHECK(cmd_simulate((tmp.path() / "bad.json").string(), {}, out, err) == kExitInput);
        json coarse = minimal_config();
        coarse["scenario"]["dt_sim"] = 0.0025;
        coarse["scenario"]["dt_sample"] = 0.005;
        write(tmp.path() / "coarse.json", coarse.dump());
        CHECK(cmd_simulate((tmp.path() / "coarse.json").string(), {}, out, err) == kExitSimulation);
        CHECK(cmd_simulate((tmp.path() / "missing.json").string(), {}, out, err) == kExitInput);
        write(tmp.path() / "broken.json", "{\"name\": ");
        CHECK(cmd_simulate((tmp.path() / "broken.json").string(), {}, out, err) == kExitInput);

        write(tmp.path() / "short.csv", "t,va,vb,vc,ia,ib,ic\n0,1,1,1,1,1,1\n");
        ClassifyArgs ca;
        ca.waveform = (tmp.path() / "short.csv").string();
        CHECK(cmd_classify(ca, {}, out, err) == kExitInput);

        // window exists but lacks the channels of the connection
        std::ostringstream csv;
        write_waveform_csv(csv, simulate_record(reference("single-phase")));
        write(tmp.path() / "sp.csv", csv.str());
        ca.waveform = (tmp.path() / "sp.csv").string();
        CHECK(cmd_classify(ca, {}, out, err) == kExitInput);

        EstimateArgs ea;
        ea.waveform = ca.waveform;
        ea.model = "NOPE";
        CHECK(cmd_estimate(ea, {}, out, err) == kExitInput);
    }

    TEST_CASE("classify through a CSV file matches the in-memory result") {
        TempDir tmp;
        // noise scaled to the post-fault window; over the whole record it would
        // swamp the collapsed faulted-phase voltage
        const SampledWindow win = analysis_window(reference("gwye-lg"));
        write_waveform_csv(tmp.path() / "win.csv", win);

        ClassifyArgs ca;
        ca.waveform = (tmp.path() / "win.csv").string();
        std::ostringstream out;
        std::ostringstream err;
        REQUIRE(cmd_classify(ca, {}, out, err) == kExitOk);
        const json report = json::parse(out.str());

        const Classification mem = classify(ConnectionKind::GroundedWye, win);
        CHECK(report["winner"] == "GW-LG-A");
        CHECK(report["trip"]["trip"] == true);
        const json& best = report["ranking"][0];
        CHECK(best["j_normalized"].get<double>() ==
              doctest::Approx(mem.best().j_normalized).epsilon(1e-12));
        CHECK(best["estimates"]["r_ohm"].get<double>() == doctest::Approx(mem.best().estimates->r).epsilon(1e-12));
        // fault path is R_f + R_g = 11 mOhm
        CHECK(best["estimates"]["rf_mohm"].get<double>() == doctest::Approx(11.0).epsilon(0.05));
    }

    TEST_CASE("estimate reports one model") {
        TempDir tmp;
        const ExperimentConfig& c = reference("delta-ll");
        write_waveform_csv(tmp.path() / "rec.csv", noisy_record(c));
        EstimateArgs ea;
        ea.waveform = (tmp.path() / "rec.csv").string();
        ea.model = "D-LL-AB";
        ea.window.t_fault = c.scenario.t_fault;
        std::ostringstream out;
        std::ostringstream err;
        REQUIRE(cmd_estimate(ea, {}, out, err) == kExitOk);
        const json report = json::parse(out.str());
        CHECK(report["model"] == "D-LL-AB");
        CHECK(report["converged"] == true);
        CHECK(report["estimates"]["r_ohm"].get<double>() == doctest::Approx(55.296).epsilon(0.02));
    }

    TEST_CASE("list-models") {
        std::ostringstream out;
        CHECK(cmd_list_models(400, true, out) == kExitOk);
        const json doc = json::parse(out.str());
        CHECK(doc["samples"] == 400);
        REQUIRE(doc["models"].is_array());
        bool found = false;
        for (const json& m : doc["models"])
            if (m["model"] == "GW-NF") {
                found = true;
                CHECK(m["dim_y"] == "9N-6");
                CHECK(m["redundancy"].get<double>() == doctest::Approx(3594.0 / 2402.0));
            }
        CHECK(found);
    }

    TEST_CASE("reproduce-tables is deterministic and matches the references") {
        TempDir tmp;
        GlobalOptions g;
        g.out = (tmp.path() / "a").string();
        std::ostringstream out;
        std::ostringstream err;
        REQUIRE(cmd_reproduce_tables(g, out, err) == kExitOk);
        g.out = (tmp.path() / "b").string();
        REQUIRE(cmd_reproduce_tables(g, out, err) == kExitOk);

        for (const char* f : {"phasor_results.csv", "dynamic_results.csv", "phasor_results.txt", "dynamic_results.txt"}) {
            CAPTURE(f);
            const std::string a = slurp(tmp.path() / "a" / f);
            CHECK_FALSE(a.empty());
            CHECK(a == slurp(tmp.path() / "b" / f));
        }
        CHECK(fs::exists(tmp.path() / "a" / "convergence" / "delta-ll.csv"));

        const std::string phasor = slurp(tmp.path() / "a" / "phasor_results.csv");
        CHECK(phasor.find("22.160000") != std::string::npos);
        CHECK(phasor.find("2.770000") != std::string::npos);
        const std::string dynamic = slurp(tmp.path() / "a" / "dynamic_results.csv");
        CHECK(dynamic.find("Delta Line-Line Fault") != std::string::npos);
    }
}
