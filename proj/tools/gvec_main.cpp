// gvec — batch front end for the landmark vector codec: label encoding,
// heatmap/vector decoding, metric evaluation, synthetic fixtures, and the
// post-processing benchmark.
//
// Manifest format (encode/decode): one sample per line,
//   <file> <box_x> <box_y> <box_w> <box_h>
// Paths are resolved relative to the manifest's directory. Lines starting
// with '#' are skipped. Boxes are squared (short side extended) and
// optionally enlarged before use; `encode` records the final square box in
// the manifest it writes next to its outputs.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gvec/gvec.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    // label
    double sigma = 2.0;
    double theta = 3.0;
    // bpm
    std::vector<int> bandwidths{3, 5};
    double alpha = 0.5;
    // decode
    double tau = 2.0;
    double shift_delta = 0.25;
    bool beyond_box = true;
    bool no_shift = false;
    // geometry
    int input_size = 256;
    int stride = 4;
    double enlarge = 0.0;
    // metrics
    std::string norm = "ion";
    double auc_t = 0.10;
    double fr_t = 0.10;
    std::vector<std::size_t> norm_left;
    std::vector<std::size_t> norm_right;
    // io / misc
    std::string pts_origin = "zero";
    std::uint64_t seed = 0;
    bool keep_going = false;
    std::string config_path;

    // per-subcommand paths
    std::string manifest;
    std::string out;
    std::string pred_dir;
    std::string gt_dir;
    std::string tags;
    std::string format = "pts";
    std::vector<int> sizes{32, 64, 128, 256, 512};
    int landmarks = 68;
    int trials = 5;
    std::vector<int> grid{64, 64};
    std::vector<double> pos{32.0, 32.0};
    double amplitude = 1.0;
    double noise = 0.0;
    std::vector<double> spike;
    std::string kind = "heatmap";

    gvec::LabelConfig label_config() const { return {sigma, theta, 3.0}; }
    gvec::BpmConfig bpm_config() const {
        if (bandwidths.size() == 1) return {bandwidths[0], bandwidths[0], alpha};
        if (bandwidths.size() != 2) throw CLI::ValidationError("--bandwidths", "expected one or two values");
        return {bandwidths[0], bandwidths[1], alpha};
    }
    gvec::DecodeConfig decode_config() const {
        return {no_shift ? 0.0 : shift_delta, beyond_box, tau, sigma};
    }
    bool one_based() const { return pts_origin == "one"; }
};

// Flags mirror the config-file keys one to one; values given on the command
// line win over the file.
void apply_config_file(Options& o, const std::string& path) {
    const auto j = nlohmann::json::parse(gvec::read_file(path));
    if (j.contains("sigma")) o.sigma = j["sigma"].get<double>();
    if (j.contains("theta")) o.theta = j["theta"].get<double>();
    if (j.contains("bandwidths")) o.bandwidths = j["bandwidths"].get<std::vector<int>>();
    if (j.contains("alpha")) o.alpha = j["alpha"].get<double>();
    if (j.contains("tau")) o.tau = j["tau"].get<double>();
    if (j.contains("shift_delta")) o.shift_delta = j["shift_delta"].get<double>();
    if (j.contains("beyond_box")) o.beyond_box = j["beyond_box"].get<bool>();
    if (j.contains("input_size")) o.input_size = j["input_size"].get<int>();
    if (j.contains("stride")) o.stride = j["stride"].get<int>();
    if (j.contains("enlarge")) o.enlarge = j["enlarge"].get<double>();
    if (j.contains("norm")) o.norm = j["norm"].get<std::string>();
    if (j.contains("auc_t")) o.auc_t = j["auc_t"].get<double>();
    if (j.contains("fr_t")) o.fr_t = j["fr_t"].get<double>();
    if (j.contains("pts_origin")) o.pts_origin = j["pts_origin"].get<std::string>();
    if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
}

struct ManifestRow {
    fs::path file;
    gvec::FaceBox box;
};

std::vector<ManifestRow> read_manifest(const fs::path& path) {
    const std::string text = gvec::read_file(path);
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::vector<ManifestRow> rows;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string file;
        gvec::FaceBox box;
        if (!(fields >> file >> box.x >> box.y >> box.width >> box.height))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected '<file> <x> <y> <w> <h>'");
        fs::path p(file);
        rows.push_back({p.is_absolute() ? p : base / p, box});
    }
    return rows;
}

gvec::CropTransform make_transform(const gvec::FaceBox& raw, const Options& o) {
    const auto box = gvec::enlarge_box(gvec::square_box(raw), o.enlarge);
    gvec::CropTransform t{box, o.input_size, o.stride};
    t.validate();
    return t;
}

gvec::PtsFile load_pts_file(const fs::path& path, const Options& o) {
    auto pts = gvec::read_pts(gvec::read_file(path));
    if (o.one_based())
        for (auto& p : pts.points) {
            p.x -= 1.0;
            p.y -= 1.0;
        }
    return pts;
}

int run_encode(const Options& o) {
    const auto rows = read_manifest(o.manifest);
    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);
    const auto label_cfg = o.label_config();
    int failures = 0;
    std::string out_manifest;
    for (const auto& row : rows) {
        try {
            const auto pts = load_pts_file(row.file, o);
            const auto t = make_transform(row.box, o);
            const int side = t.heatmap_side();
            std::vector<gvec::GaussianVectorPair> pairs;
            pairs.reserve(pts.n_points());
            for (std::size_t k = 0; k < pts.points.size(); ++k) {
                const auto hp = gvec::to_heatmap_space(pts.points[k], t);
                const int qx = gvec::quantize_coord(hp.x);
                const int qy = gvec::quantize_coord(hp.y);
                const bool x_in = qx >= 0 && qx < side;
                const bool y_in = qy >= 0 && qy < side;
                gvec::GaussianVectorPair pair;
                pair.landmark_index = static_cast<int>(k);
                if (x_in && y_in) {
                    pair = gvec::encode_vector_label(hp, {side, side}, label_cfg);
                    pair.landmark_index = static_cast<int>(k);
                } else {
                    // out-of-grid on at least one axis: keep the in-grid axis
                    // as a normal label and leave the truncated tail on the
                    // other, the shape the beyond-box decoder expects
                    gvec::SynthSpec tail;
                    tail.width = side;
                    tail.height = side;
                    tail.pos = hp;
                    tail.amplitude = 1.0;
                    tail.sigma = o.sigma;
                    const auto tails = gvec::synth_vector_pair(tail);
                    pair.x = x_in ? gvec::encode_label_axis(hp.x, side, label_cfg) : tails.x;
                    pair.y = y_in ? gvec::encode_label_axis(hp.y, side, label_cfg) : tails.y;
                    std::cerr << "note: " << row.file.filename().string() << ": landmark " << k
                              << " out of grid (" << hp.x << ", " << hp.y << "), wrote beyond-box label\n";
                }
                pairs.push_back(std::move(pair));
            }
            const auto name = row.file.stem().string() + ".gvt";
            gvec::write_file_atomic(out_dir / name, gvec::write_tensor(gvec::tensor_from_pairs(pairs)));
            std::ostringstream entry;
            entry << name << ' ' << t.square_box.x << ' ' << t.square_box.y << ' ' << t.square_box.width
                  << ' ' << t.square_box.height << '\n';
            out_manifest += entry.str();
        } catch (const std::exception& e) {
            std::cerr << "error: " << row.file.string() << ": " << e.what() << "\n";
            ++failures;
        }
    }
    gvec::write_file_atomic(out_dir / "manifest.txt", out_manifest);
    if (failures > 0) std::cerr << failures << " sample(s) failed\n";
    return failures > 0 && !o.keep_going ? 1 : 0;
}

int run_decode(const Options& o) {
    const auto rows = read_manifest(o.manifest);
    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);
    const auto dec_cfg = o.decode_config();
    const auto bpm_cfg = o.bpm_config();
    int failures = 0;
    for (const auto& row : rows) {
        try {
            const auto tensor = gvec::read_tensor(gvec::read_file(row.file));
            // boxes recorded by `encode` are already square; raw detector
            // boxes get the same squaring treatment here
            gvec::CropTransform t = make_transform(row.box, o);
            const int side = t.heatmap_side();
            std::vector<gvec::GaussianVectorPair> pairs;
            if (tensor.dims.size() == 3 && tensor.dims[2] == 2) {
                if (static_cast<int>(tensor.dims[1]) != side)
                    throw std::runtime_error("vector side " + std::to_string(tensor.dims[1]) +
                                             " does not match input-size/stride " + std::to_string(side));
                pairs = gvec::pairs_from_tensor(tensor);
            } else if (tensor.dims.size() == 3) {
                if (static_cast<int>(tensor.dims[1]) != side || static_cast<int>(tensor.dims[2]) != side)
                    throw std::runtime_error("heatmap shape does not match input-size/stride " +
                                             std::to_string(side));
                pairs = gvec::bpm_apply(gvec::stack_from_tensor(tensor), bpm_cfg);
            } else {
                throw std::runtime_error("expected rank-3 tensor (L,h,w) or (L,side,2)");
            }
            const auto set = gvec::decode_stack(pairs, dec_cfg, t);
            if (o.format == "json") {
                nlohmann::ordered_json j;
                auto arr = nlohmann::ordered_json::array();
                for (const auto& p : set.points) arr.push_back({p.x, p.y});
                j["points"] = arr;
                gvec::write_file_atomic(out_dir / (row.file.stem().string() + ".json"), j.dump(2) + "\n");
            } else {
                gvec::PtsFile pts;
                pts.points = set.points;
                gvec::write_file_atomic(out_dir / (row.file.stem().string() + ".pts"), gvec::write_pts(pts));
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << row.file.string() << ": " << e.what() << "\n";
            ++failures;
        }
    }
    if (failures > 0) std::cerr << failures << " sample(s) failed\n";
    return failures > 0 && !o.keep_going ? 1 : 0;
}

std::map<std::string, fs::path> list_pts(const fs::path& dir) {
    std::map<std::string, fs::path> files;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pts")
            files[entry.path().stem().string()] = entry.path();
    return files;
}

gvec::NormScheme make_scheme(const Options& o, std::size_t n_points) {
    if (!o.norm_left.empty() || !o.norm_right.empty()) {
        if (o.norm_left.empty() || o.norm_right.empty())
            throw std::runtime_error("--norm-left and --norm-right must be given together");
        return {gvec::NormKind::explicit_pairs, o.norm_left, o.norm_right};
    }
    if (o.norm == "bbox-gm") return gvec::norm_preset(gvec::NormKind::bbox_geometric_mean, n_points);
    if (o.norm == "ipn") return gvec::norm_preset(gvec::NormKind::inter_pupil, n_points);
    if (o.norm == "ion") return gvec::norm_preset(gvec::NormKind::inter_ocular, n_points);
    throw std::runtime_error("unknown --norm value: " + o.norm);
}

int run_eval(const Options& o) {
    const auto preds = list_pts(o.pred_dir);
    const auto gts = list_pts(o.gt_dir);
    std::vector<std::string> unpaired;
    for (const auto& [name, _] : preds)
        if (!gts.count(name)) unpaired.push_back(name + " (only in pred)");
    for (const auto& [name, _] : gts)
        if (!preds.count(name)) unpaired.push_back(name + " (only in gt)");
    if (!unpaired.empty()) {
        for (const auto& u : unpaired) std::cerr << "unpaired: " << u << "\n";
        if (!o.keep_going) return 1;
    }

    std::vector<std::string> names;
    std::vector<gvec::LandmarkSet> pred_sets, gt_sets;
    for (const auto& [name, path] : preds) {
        const auto it = gts.find(name);
        if (it == gts.end()) continue;
        gvec::LandmarkSet pred{load_pts_file(path, o).points, gvec::CoordSpace::image};
        gvec::LandmarkSet gt{load_pts_file(it->second, o).points, gvec::CoordSpace::image};
        names.push_back(name);
        pred_sets.push_back(std::move(pred));
        gt_sets.push_back(std::move(gt));
    }
    if (pred_sets.empty()) throw std::runtime_error("no sample pairs to evaluate");

    const auto scheme = make_scheme(o, gt_sets.front().size());
    const auto report = gvec::evaluate(pred_sets, gt_sets, scheme, o.auc_t, o.fr_t);
    auto j = nlohmann::ordered_json::parse(gvec::write_report(report));

    if (!o.tags.empty()) {
        std::map<std::string, std::vector<std::size_t>> by_tag;
        std::istringstream in(gvec::read_file(o.tags));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream fields(line);
            std::string file, tag;
            if (!(fields >> file >> tag)) throw std::runtime_error("tags: expected '<file> <tag>'");
            const auto stem = fs::path(file).stem().string();
            const auto it = std::find(names.begin(), names.end(), stem);
            if (it != names.end()) by_tag[tag].push_back(static_cast<std::size_t>(it - names.begin()));
        }
        nlohmann::ordered_json subsets;
        for (const auto& [tag, idxs] : by_tag) {
            std::vector<gvec::LandmarkSet> p, g;
            for (auto i : idxs) {
                p.push_back(pred_sets[i]);
                g.push_back(gt_sets[i]);
            }
            const auto sub = gvec::evaluate(p, g, scheme, o.auc_t, o.fr_t);
            subsets[tag] = nlohmann::ordered_json::parse(gvec::write_report(sub));
        }
        j["subsets"] = subsets;
    }

    const std::string text = j.dump(2) + "\n";
    if (o.out.empty())
        std::cout << text;
    else
        gvec::write_file_atomic(o.out, text);
    return 0;
}

int run_bench(const Options& o) {
    const auto report = gvec::bench_decode(o.sizes, o.landmarks, o.trials);
    const std::string text = gvec::write_bench_report(report);
    if (o.out.empty())
        std::cout << text;
    else
        gvec::write_file_atomic(o.out, text);
    for (const auto& e : report.entries)
        std::cerr << "n=" << e.n << " wall 2d/vec: " << e.wall_2d_ns << "/" << e.wall_vec_ns << " ns ("
                  << (e.wall_vec_ns ? static_cast<double>(e.wall_2d_ns) / static_cast<double>(e.wall_vec_ns)
                                    : 0.0)
                  << "x)\n";
    return 0;
}

int run_synth(const Options& o) {
    if (o.grid.size() != 2) throw std::runtime_error("--grid expects W,H");
    if (o.pos.size() != 2) throw std::runtime_error("--pos expects X,Y");
    gvec::SynthSpec spec;
    spec.width = o.grid[0];
    spec.height = o.grid[1];
    spec.pos = {o.pos[0], o.pos[1]};
    spec.amplitude = o.amplitude;
    spec.sigma = o.sigma;
    spec.noise_amplitude = o.noise;
    spec.seed = o.seed;
    if (!o.spike.empty()) {
        if (o.spike.size() != 3) throw std::runtime_error("--spike expects X,Y,MAG");
        spec.spike = gvec::Spike{static_cast<int>(o.spike[0]), static_cast<int>(o.spike[1]), o.spike[2]};
    }
    gvec::TensorFile tensor;
    if (o.kind == "heatmap") {
        const auto h = synth_heatmap(spec);
        tensor = gvec::tensor_from_stack({1, h.height, h.width, h.values});
    } else if (o.kind == "vector") {
        if (spec.width != spec.height) throw std::runtime_error("vector output requires a square grid");
        tensor = gvec::tensor_from_pairs({gvec::synth_vector_pair(spec)});
    } else {
        throw std::runtime_error("unknown --kind value: " + o.kind);
    }
    if (o.out.empty()) throw std::runtime_error("synth requires --out");
    gvec::write_file_atomic(o.out, gvec::write_tensor(tensor));
    return 0;
}

void add_shared_options(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config_path, "JSON config file with flag defaults (applied first)");
    sub->add_option("--sigma", o.sigma, "Gaussian standard deviation in heatmap px")->capture_default_str();
    sub->add_option("--theta", o.theta, "peak boost added to the label maximum")->capture_default_str();
    sub->add_option("--bandwidths", o.bandwidths, "band pooling widths A,B (odd)")
        ->delimiter(',')
        ->expected(1, 2);
    sub->add_option("--alpha", o.alpha, "weight of the first bandwidth")->capture_default_str();
    sub->add_option("--tau", o.tau, "assumed peak scale for beyond-box inversion")->capture_default_str();
    sub->add_option("--shift-delta", o.shift_delta, "subpixel shift magnitude in [0,0.5)")
        ->capture_default_str();
    sub->add_flag("--beyond-box,!--no-beyond-box", o.beyond_box, "invert truncated tails at vector endpoints");
    sub->add_option("--norm", o.norm, "normalization: ipn | ion | bbox-gm")->capture_default_str();
    sub->add_option("--auc-t", o.auc_t, "AUC threshold")->capture_default_str();
    sub->add_option("--fr-t", o.fr_t, "failure-rate threshold")->capture_default_str();
    sub->add_option("--pts-origin", o.pts_origin, "pts coordinate origin: zero | one")
        ->check(CLI::IsMember({"zero", "one"}))
        ->capture_default_str();
    sub->add_option("--seed", o.seed, "RNG seed for synthetic data")->capture_default_str();
    sub->add_option("--out", o.out, "output file or directory");
    sub->add_option("--input-size", o.input_size, "crop resolution in px")->capture_default_str();
    sub->add_option("--stride", o.stride, "heatmap stride relative to the crop")->capture_default_str();
    sub->add_option("--enlarge", o.enlarge, "box enlargement fraction applied after squaring")
        ->capture_default_str();
    sub->add_flag("--keep-going", o.keep_going, "exit 0 even if some samples fail");
}

}  // namespace

int main(int argc, char** argv) {
    Options o;

    // the config file seeds the defaults, explicit flags override it
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        try {
            if (arg == "--config" && i + 1 < argc)
                apply_config_file(o, argv[i + 1]);
            else if (arg.rfind("--config=", 0) == 0)
                apply_config_file(o, arg.substr(9));
        } catch (const std::exception& e) {
            std::cerr << "error: config file: " << e.what() << "\n";
            return 1;
        }
    }

    CLI::App app{"landmark vector codec toolkit"};
    app.require_subcommand(1);
    app.add_option("--config", o.config_path, "JSON config file with flag defaults (applied first)");
    int rc = 0;

    auto* encode = app.add_subcommand("encode", "encode .pts annotations into vector label tensors");
    encode->add_option("--manifest", o.manifest, "sample manifest: '<pts> <x> <y> <w> <h>' per line")
        ->required();
    add_shared_options(encode, o);
    encode->callback([&]() { rc = run_encode(o); });

    auto* decode = app.add_subcommand(
        "decode", "decode tensors into .pts predictions; rank-3 with last dim 2 is a vector stack, other rank-3 a heatmap stack");
    decode->add_option("--manifest", o.manifest, "sample manifest: '<gvt> <x> <y> <w> <h>' per line")
        ->required();
    decode->add_option("--format", o.format, "prediction format: pts | json")
        ->check(CLI::IsMember({"pts", "json"}))
        ->capture_default_str();
    decode->add_flag("--no-shift", o.no_shift, "disable the subpixel shift");
    add_shared_options(decode, o);
    decode->callback([&]() { rc = run_decode(o); });

    auto* eval = app.add_subcommand("eval", "evaluate predictions against ground truth");
    eval->add_option("--pred", o.pred_dir, "directory of predicted .pts files")->required();
    eval->add_option("--gt", o.gt_dir, "directory of ground-truth .pts files")->required();
    eval->add_option("--tags", o.tags, "tag manifest '<file> <tag>' for per-subset reports");
    eval->add_option("--norm-left", o.norm_left, "explicit left reference indices")->delimiter(',');
    eval->add_option("--norm-right", o.norm_right, "explicit right reference indices")->delimiter(',');
    add_shared_options(eval, o);
    eval->callback([&]() { rc = run_eval(o); });

    auto* bench = app.add_subcommand("bench", "compare 2D and vector decode post-processing costs");
    bench->add_option("--sizes", o.sizes, "grid sides to measure, ascending")->delimiter(',');
    bench->add_option("--landmarks", o.landmarks, "channels per sample")->capture_default_str();
    bench->add_option("--trials", o.trials, "timing repetitions (median is reported)")
        ->capture_default_str();
    add_shared_options(bench, o);
    bench->callback([&]() { rc = run_bench(o); });

    auto* synth = app.add_subcommand("synth", "write a synthetic heatmap or vector tensor");
    synth->add_option("--grid", o.grid, "grid size W,H")->delimiter(',');
    synth->add_option("--pos", o.pos, "landmark position X,Y (may be out of grid)")->delimiter(',');
    synth->add_option("--amplitude", o.amplitude, "profile peak value")->capture_default_str();
    synth->add_option("--noise", o.noise, "uniform noise amplitude")->capture_default_str();
    synth->add_option("--spike", o.spike, "single-pixel spike X,Y,MAG")->delimiter(',');
    synth->add_option("--kind", o.kind, "tensor kind: heatmap | vector")
        ->check(CLI::IsMember({"heatmap", "vector"}))
        ->capture_default_str();
    add_shared_options(synth, o);
    synth->callback([&]() { rc = run_synth(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
