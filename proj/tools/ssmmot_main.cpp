// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 ssmmot contributors

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "ssmmot/association.hpp"
#include "ssmmot/benchmark.hpp"
#include "ssmmot/checkpoint.hpp"
#include "ssmmot/errors.hpp"
#include "ssmmot/merging.hpp"
#include "ssmmot/metrics.hpp"
#include "ssmmot/mot_io.hpp"
#include "ssmmot/synthetic.hpp"
#include "ssmmot/training.hpp"
#include "ssmmot/version.hpp"

namespace fs = std::filesystem;
using namespace ssmmot;

namespace {

// ---------------------------------------------------------------------------
// Run-config file: flat `key = value` lines, '#' comments. Keys must belong
// to the schema below; values override command-line flags, which override
// defaults.

const std::set<std::string>& config_schema() {
    static const std::set<std::string> keys = {
        // model
        "blocks", "dim", "expand", "embed_dim", "max_len",
        // training
        "epochs", "batch", "lr", "clip_norm",
        // association
        "tau_high", "tau_low", "iou_gate_stage1", "iou_gate_stage2", "max_age",
        "min_hits", "new_track_score",
        // merging
        "max_gap", "max_dist", "tau_cos",
        // synthetic
        "kind", "objects", "frames", "width", "height", "occlusion", "noise",
        "low_conf_fraction",
        // paths and misc
        "out", "det", "res", "gt", "model", "seqinfo", "report", "data",
        "loss_csv", "seed", "motion", "metrics", "horizons", "train_seqs",
        "kinds"};
    return keys;
}

std::map<std::string, std::string> parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string trimmed;
        for (char c : line) {
            if (c != '\r') trimmed.push_back(c);
        }
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        trimmed = strip(trimmed);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
        const std::string key = strip(trimmed.substr(0, eq));
        const std::string value = strip(trimmed.substr(eq + 1));
        if (!config_schema().count(key)) {
            throw ParseError(line_no, "unknown config key: " + key);
        }
        out[key] = value;
    }
    return out;
}

// Typed override helpers for the config map.
struct ConfigView {
    std::map<std::string, std::string> values;

    template <typename T>
    void get(const std::string& key, T& target) const {
        const auto it = values.find(key);
        if (it == values.end()) return;
        std::istringstream ss(it->second);
        T parsed;
        if (!(ss >> parsed)) {
            throw std::runtime_error("config value for '" + key + "' is not valid");
        }
        target = parsed;
    }

    void get(const std::string& key, std::string& target) const {
        const auto it = values.find(key);
        if (it != values.end()) target = it->second;
    }
};

ModelConfig model_config_from(int blocks, int dim, int expand, int embed_dim,
                              int max_len) {
    ModelConfig cfg;
    cfg.n_blocks = blocks;
    cfg.model_dim = dim;
    cfg.expand_factor = expand;
    cfg.embed_dim = embed_dim;
    cfg.max_len = max_len;
    return cfg;
}

std::vector<Detection> load_detections(const std::string& path) {
    std::vector<Detection> out;
    for (const auto& rec : parse_mot(path)) {
        out.push_back(Detection{rec.bbox, rec.conf, rec.frame});
    }
    return out;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<std::pair<std::string, MetricReport>>& rows) {
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open " + path);
    csv << "name,mota,idf1,hota,det_a,ass_a,fp,fn,idsw,gt_count\n";
    for (const auto& [name, r] : rows) {
        csv << name << ',' << format_shortest(r.mota) << ','
            << format_shortest(r.idf1) << ',' << format_shortest(r.hota) << ','
            << format_shortest(r.det_a) << ',' << format_shortest(r.ass_a) << ','
            << r.fp << ',' << r.fn << ',' << r.idsw << ',' << r.gt_count << "\n";
    }
}

void print_metric_row(const std::string& name, const MetricReport& r) {
    std::printf("%-16s mota %7.4f  idf1 %7.4f  hota %7.4f  deta %7.4f  assa %7.4f"
                "  fp %ld fn %ld idsw %ld\n",
                name.c_str(), r.mota, r.idf1, r.hota, r.det_a, r.ass_a, r.fp, r.fn,
                r.idsw);
}

// ---------------------------------------------------------------------------
// Subcommand state

struct SynthArgs {
    std::string kind = "sinusoid";
    int objects = 8;
    int frames = 300;
    int width = 1024;
    int height = 768;
    double occlusion = 0.0;
    double noise = 0.0;
    double low_conf_fraction = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string config;
};

int run_synth(SynthArgs a) {
    if (!a.config.empty()) {
        const ConfigView cv{parse_run_config(a.config)};
        cv.get("kind", a.kind);
        cv.get("objects", a.objects);
        cv.get("frames", a.frames);
        cv.get("width", a.width);
        cv.get("height", a.height);
        cv.get("occlusion", a.occlusion);
        cv.get("noise", a.noise);
        cv.get("low_conf_fraction", a.low_conf_fraction);
        cv.get("seed", a.seed);
        cv.get("out", a.out);
    }
    SyntheticConfig cfg;
    cfg.kind = parse_motion_kind(a.kind);
    cfg.objects = a.objects;
    cfg.frames = a.frames;
    cfg.image = ImageSize{a.width, a.height};
    cfg.occlusion_rate = a.occlusion;
    cfg.det_noise_std = a.noise;
    cfg.low_conf_fraction = a.low_conf_fraction;
    cfg.seed = a.seed;

    const SyntheticResult result = gen_synthetic(cfg);
    fs::create_directories(a.out);
    write_mot(result.gt, a.out + "/gt.txt");
    write_mot(result.detections, a.out + "/det.txt");
    write_seqinfo(SeqInfo{cfg.image, cfg.frames}, a.out);
    std::printf("wrote %s: %zu gt rows, %zu detections, %d frames\n", a.out.c_str(),
                result.gt.size(), result.detections.size(), cfg.frames);
    return 0;
}

struct TrainArgs {
    std::vector<std::string> data;
    int epochs = 500;
    int batch = 32;
    double lr = 1e-4;
    double clip_norm = 5.0;
    int blocks = 2;
    int dim = 64;
    int expand = 2;
    int embed_dim = 64;
    int max_len = 10;
    std::uint64_t seed = 0;
    std::string out;
    std::string loss_csv;
    std::string config;
};

int run_train(TrainArgs a) {
    if (!a.config.empty()) {
        const ConfigView cv{parse_run_config(a.config)};
        std::string data_joined;
        cv.get("data", data_joined);
        if (!data_joined.empty()) {
            a.data.clear();
            std::istringstream ss(data_joined);
            std::string item;
            while (std::getline(ss, item, ',')) a.data.push_back(item);
        }
        cv.get("epochs", a.epochs);
        cv.get("batch", a.batch);
        cv.get("lr", a.lr);
        cv.get("clip_norm", a.clip_norm);
        cv.get("blocks", a.blocks);
        cv.get("dim", a.dim);
        cv.get("expand", a.expand);
        cv.get("embed_dim", a.embed_dim);
        cv.get("max_len", a.max_len);
        cv.get("seed", a.seed);
        cv.get("out", a.out);
        cv.get("loss_csv", a.loss_csv);
    }
    const ModelConfig cfg =
        model_config_from(a.blocks, a.dim, a.expand, a.embed_dim, a.max_len);
    const TrackletStore store = load_tracklet_store(a.data);

    TrainOptions opts;
    opts.epochs = a.epochs;
    opts.batch = a.batch;
    opts.lr = a.lr;
    opts.clip_norm = a.clip_norm;
    opts.seed = a.seed;
    opts.checkpoint_path = a.out;
    opts.loss_csv_path = a.loss_csv.empty() ? a.out + ".loss.csv" : a.loss_csv;

    const TrainResult result = train(store, cfg, opts);
    std::printf("trained %d epochs on %zu tracklets -> %s\n", a.epochs,
                store.tracklets.size(), a.out.c_str());
    if (!result.history.empty()) {
        const LossReport& last = result.history.back();
        std::printf("final losses: giou %.6f mse %.6f cos %.6f total %.6f\n",
                    last.loss_giou, last.loss_mse, last.loss_cos, last.loss_total);
    }
    return 0;
}

struct TrackArgs {
    std::string det;
    std::string seqinfo;
    std::string motion;
    std::string model;
    std::string out;
    std::string config;
    double tau_high = 0.6;
    double tau_low = 0.1;
    double iou_gate_stage1 = 0.3;
    double iou_gate_stage2 = 0.5;
    int max_age = 30;
    int min_hits = 3;
    double new_track_score = 0.7;
};

int run_track(TrackArgs a) {
    if (!a.config.empty()) {
        const ConfigView cv{parse_run_config(a.config)};
        cv.get("det", a.det);
        cv.get("seqinfo", a.seqinfo);
        cv.get("motion", a.motion);
        cv.get("model", a.model);
        cv.get("out", a.out);
        cv.get("tau_high", a.tau_high);
        cv.get("tau_low", a.tau_low);
        cv.get("iou_gate_stage1", a.iou_gate_stage1);
        cv.get("iou_gate_stage2", a.iou_gate_stage2);
        cv.get("max_age", a.max_age);
        cv.get("min_hits", a.min_hits);
        cv.get("new_track_score", a.new_track_score);
    }
    if (a.motion != "ssm" && a.motion != "kalman") {
        throw std::runtime_error("--motion must be ssm or kalman");
    }
    if (a.motion == "ssm" && a.model.empty()) {
        throw std::runtime_error("--motion ssm requires --model");
    }

    const SeqInfo info = read_seqinfo(a.seqinfo);
    const auto detections = load_detections(a.det);

    AssociationConfig cfg;
    cfg.tau_high = a.tau_high;
    cfg.tau_low = a.tau_low;
    cfg.iou_gate_stage1 = a.iou_gate_stage1;
    cfg.iou_gate_stage2 = a.iou_gate_stage2;
    cfg.max_age = a.max_age;
    cfg.min_hits = a.min_hits;
    cfg.new_track_score = a.new_track_score;

    std::vector<MotFrameRecord> records;
    if (a.motion == "kalman") {
        records = track_sequence(detections, info.frames, cfg,
                                 kalman_motion_factory());
    } else {
        const Checkpoint ckpt = load_checkpoint(a.model);
        const auto params = std::make_shared<ModelParams>(ckpt.params);
        records = track_sequence(detections, info.frames, cfg,
                                 ssm_motion_factory(params, ckpt.cfg, info.image),
                                 ckpt.cfg.max_len);
    }
    write_mot(records, a.out);
    std::printf("tracked %d frames with %s motion -> %s (%zu rows)\n", info.frames,
                a.motion.c_str(), a.out.c_str(), records.size());
    return 0;
}

struct MergeArgs {
    std::string res;
    std::string seqinfo;
    std::string model;
    int max_gap = 50;
    double max_dist = 50.0;
    double tau = 0.3;
    std::string out;
    std::string report;
    std::string config;
};

int run_merge(MergeArgs a) {
    if (!a.config.empty()) {
        const ConfigView cv{parse_run_config(a.config)};
        cv.get("res", a.res);
        cv.get("seqinfo", a.seqinfo);
        cv.get("model", a.model);
        cv.get("max_gap", a.max_gap);
        cv.get("max_dist", a.max_dist);
        cv.get("tau_cos", a.tau);
        cv.get("out", a.out);
        cv.get("report", a.report);
    }
    const SeqInfo info = read_seqinfo(a.seqinfo);
    const auto results = parse_mot(a.res);
    const Checkpoint ckpt = load_checkpoint(a.model);

    MergeConfig cfg;
    cfg.max_gap = a.max_gap;
    cfg.max_dist = a.max_dist;
    cfg.tau_cos = a.tau;

    const ExtractResult ext =
        extract_embeddings(results, ckpt.params, ckpt.cfg, info.image);
    const auto partition = cluster(ext.records, cfg);
    const auto merged = apply_merge(results, partition);
    write_mot(merged, a.out);

    std::ostringstream rep;
    rep << "tracklets: " << ext.records.size() << "\n";
    rep << "excluded (too short):";
    for (int id : ext.excluded_ids) rep << " " << id;
    rep << "\n";
    rep << "forward passes: " << ext.forward_passes << "\n";
    int merges = 0;
    rep << "clusters:\n";
    for (const auto& members : partition) {
        rep << " ";
        for (int id : members) rep << " " << id;
        rep << "\n";
        if (members.size() > 1) merges += static_cast<int>(members.size()) - 1;
    }
    rep << "merges: " << merges << "\n";
    rep << "pair distances:\n";
    for (std::size_t i = 0; i < ext.records.size(); ++i) {
        for (std::size_t j = i + 1; j < ext.records.size(); ++j) {
            const GateResult g = gated_distance(ext.records[i], ext.records[j], cfg);
            rep << "  (" << ext.records[i].id << "," << ext.records[j].id << ") ";
            switch (g.status) {
                case GateStatus::Ok:
                    rep << format_shortest(g.distance) << "\n";
                    break;
                case GateStatus::Overlap:
                    rep << "forbidden: spans overlap\n";
                    break;
                case GateStatus::GapTooLarge:
                    rep << "forbidden: gap > " << cfg.max_gap << "\n";
                    break;
                case GateStatus::TooFarApart:
                    rep << "forbidden: endpoint distance > "
                        << format_shortest(cfg.max_dist) << "\n";
                    break;
            }
        }
    }
    if (!a.report.empty()) {
        std::ofstream rf(a.report, std::ios::binary);
        if (!rf) throw std::runtime_error("cannot open " + a.report);
        rf << rep.str();
    }
    std::printf("merged %d fragment(s) across %zu cluster(s) -> %s\n", merges,
                partition.size(), a.out.c_str());
    return 0;
}

struct EvalArgs {
    std::string gt;
    std::string res;
    std::string metrics = "hota,mota,idf1";
    std::string csv;
    std::string config;
};

int run_eval(EvalArgs a) {
    if (!a.config.empty()) {
        const ConfigView cv{parse_run_config(a.config)};
        cv.get("gt", a.gt);
        cv.get("res", a.res);
        cv.get("metrics", a.metrics);
    }
    const auto gt = parse_mot(a.gt);
    const auto res = parse_mot(a.res);
    const MetricReport rep = evaluate_all(gt, res);

    std::set<std::string> wanted;
    std::istringstream ss(a.metrics);
    std::string item;
    while (std::getline(ss, item, ',')) wanted.insert(item);

    if (wanted.count("mota")) {
        std::printf("mota %.6f (fp %ld fn %ld idsw %ld gt %ld)\n", rep.mota, rep.fp,
                    rep.fn, rep.idsw, rep.gt_count);
    }
    if (wanted.count("idf1")) std::printf("idf1 %.6f\n", rep.idf1);
    if (wanted.count("hota")) {
        std::printf("hota %.6f (deta %.6f assa %.6f)\n", rep.hota, rep.det_a,
                    rep.ass_a);
    }
    if (!a.csv.empty()) write_metrics_csv(a.csv, {{"eval", rep}});
    return 0;
}

struct CompareArgs {
    std::string out;
    std::string kinds = "linear,sinusoid,bounce";
    int objects = 8;
    int frames = 300;
    int train_seqs = 2;
    int epochs = 150;
    int batch = 32;
    double lr = 1e-3;
    int blocks = 2;
    int dim = 64;
    int expand = 2;
    int embed_dim = 64;
    int max_len = 10;
    int horizons = 5;
    double occlusion = 0.1;
    double noise = 2.0;
    std::uint64_t seed = 0;
    std::string config;
};

int run_compare(CompareArgs a) {
    if (!a.config.empty()) {
        const ConfigView cv{parse_run_config(a.config)};
        cv.get("out", a.out);
        cv.get("kinds", a.kinds);
        cv.get("objects", a.objects);
        cv.get("frames", a.frames);
        cv.get("train_seqs", a.train_seqs);
        cv.get("epochs", a.epochs);
        cv.get("batch", a.batch);
        cv.get("lr", a.lr);
        cv.get("dim", a.dim);
        cv.get("blocks", a.blocks);
        cv.get("horizons", a.horizons);
        cv.get("occlusion", a.occlusion);
        cv.get("noise", a.noise);
        cv.get("seed", a.seed);
    }
    std::vector<std::string> kinds;
    {
        std::istringstream ss(a.kinds);
        std::string item;
        while (std::getline(ss, item, ',')) kinds.push_back(item);
    }
    if (kinds.empty()) throw std::runtime_error("--kinds must name at least one kind");

    fs::create_directories(a.out);

    // Stage 1: synthesize training and evaluation sequences per kind.
    std::vector<std::string> train_dirs;
    std::uint64_t stream = 1;
    for (const auto& kind : kinds) {
        for (int s = 0; s < a.train_seqs; ++s) {
            SynthArgs sa;
            sa.kind = kind;
            sa.objects = a.objects;
            sa.frames = a.frames;
            sa.seed = Rng::derive_seed(a.seed, stream++);
            sa.out = a.out + "/" + kind + "/train" + std::to_string(s);
            run_synth(sa);
            train_dirs.push_back(sa.out);
        }
        SynthArgs ea;
        ea.kind = kind;
        ea.objects = a.objects;
        ea.frames = a.frames;
        ea.occlusion = a.occlusion;
        ea.noise = a.noise;
        ea.seed = Rng::derive_seed(a.seed, stream++);
        ea.out = a.out + "/" + kind + "/eval";
        run_synth(ea);
    }

    // Stage 2: one model trained jointly on every kind.
    TrainArgs ta;
    ta.data = train_dirs;
    ta.epochs = a.epochs;
    ta.batch = a.batch;
    ta.lr = a.lr;
    ta.blocks = a.blocks;
    ta.dim = a.dim;
    ta.expand = a.expand;
    ta.embed_dim = a.embed_dim;
    ta.max_len = a.max_len;
    ta.seed = a.seed;
    ta.out = a.out + "/model.ckpt";
    run_train(ta);

    const Checkpoint ckpt = load_checkpoint(ta.out);

    // Stage 3: track each eval sequence with both motion models and score.
    std::vector<std::pair<std::string, MetricReport>> metric_rows;
    std::ofstream horizons_csv(a.out + "/horizons.csv", std::ios::binary);
    horizons_csv << "kind,motion";
    for (int k = 1; k <= a.horizons; ++k) horizons_csv << ",h" << k;
    horizons_csv << "\n";

    for (const auto& kind : kinds) {
        const std::string dir = a.out + "/" + kind + "/eval";
        for (const std::string motion : {"ssm", "kalman"}) {
            TrackArgs tr;
            tr.det = dir + "/det.txt";
            tr.seqinfo = dir;
            tr.motion = motion;
            tr.model = ta.out;
            tr.out = a.out + "/" + kind + "/res_" + motion + ".txt";
            run_track(tr);
            const MetricReport rep =
                evaluate_all(parse_mot(dir + "/gt.txt"), parse_mot(tr.out));
            metric_rows.emplace_back(kind + "/" + motion, rep);
        }

        const TrackletStore eval_store = load_tracklet_store({dir});
        const HorizonReport hr =
            prediction_benchmark(eval_store, ckpt.params, ckpt.cfg, a.horizons);
        horizons_csv << kind << ",ssm";
        for (double v : hr.ssm_iou) horizons_csv << "," << format_shortest(v);
        horizons_csv << "\n" << kind << ",kalman";
        for (double v : hr.kf_iou) horizons_csv << "," << format_shortest(v);
        horizons_csv << "\n";
    }
    horizons_csv.close();

    std::printf("\n=== tracking metrics (per kind / motion) ===\n");
    for (const auto& [name, rep] : metric_rows) print_metric_row(name, rep);
    write_metrics_csv(a.out + "/metrics.csv", metric_rows);
    std::printf("wrote %s/metrics.csv and %s/horizons.csv\n", a.out.c_str(),
                a.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ssmmot: state-space motion-model multi-object tracking toolkit"};
    app.set_version_flag("--version", std::string("ssmmot ") + kVersion +
                                          " (checkpoint format " +
                                          kCheckpointHeader + ")");
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic sequence");
    synth_cmd->add_option("--kind", synth.kind, "linear|sinusoid|bounce|random_walk");
    synth_cmd->add_option("--objects", synth.objects)->check(CLI::Range(1, 10000));
    synth_cmd->add_option("--frames", synth.frames)->check(CLI::Range(1, 1000000));
    synth_cmd->add_option("--image-width", synth.width)->check(CLI::Range(16, 100000));
    synth_cmd->add_option("--image-height", synth.height)->check(CLI::Range(16, 100000));
    synth_cmd->add_option("--occlusion", synth.occlusion)->check(CLI::Range(0.0, 0.99));
    synth_cmd->add_option("--noise", synth.noise)->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--low-conf-fraction", synth.low_conf_fraction)
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--seed", synth.seed);
    synth_cmd->add_option("--out", synth.out, "output directory")->required();
    synth_cmd->add_option("--config", synth.config, "run-config file");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "train the motion model");
    train_cmd->add_option("--data", train_args.data, "sequence directories")
        ->required()
        ->expected(-1);
    train_cmd->add_option("--epochs", train_args.epochs)->check(CLI::Range(0, 1000000));
    train_cmd->add_option("--batch", train_args.batch)->check(CLI::Range(1, 100000));
    train_cmd->add_option("--lr", train_args.lr)->check(CLI::PositiveNumber);
    train_cmd->add_option("--clip-norm", train_args.clip_norm)->check(CLI::PositiveNumber);
    train_cmd->add_option("--blocks", train_args.blocks)->check(CLI::Range(1, 64));
    train_cmd->add_option("--dim", train_args.dim)->check(CLI::Range(1, 4096));
    train_cmd->add_option("--expand", train_args.expand)->check(CLI::Range(1, 16));
    train_cmd->add_option("--embed-dim", train_args.embed_dim)->check(CLI::Range(1, 4096));
    train_cmd->add_option("--max-len", train_args.max_len)->check(CLI::Range(2, 1000));
    train_cmd->add_option("--seed", train_args.seed);
    train_cmd->add_option("--out", train_args.out, "checkpoint path")->required();
    train_cmd->add_option("--loss-csv", train_args.loss_csv);
    train_cmd->add_option("--config", train_args.config, "run-config file");

    TrackArgs track_args;
    auto* track_cmd = app.add_subcommand("track", "run the online tracker");
    track_cmd->add_option("--det", track_args.det, "detection file")->required();
    track_cmd->add_option("--seqinfo", track_args.seqinfo, "sequence directory")
        ->required();
    track_cmd->add_option("--motion", track_args.motion, "ssm|kalman")->required();
    track_cmd->add_option("--model", track_args.model, "checkpoint (ssm motion)");
    track_cmd->add_option("--out", track_args.out, "result file")->required();
    track_cmd->add_option("--tau-high", track_args.tau_high);
    track_cmd->add_option("--tau-low", track_args.tau_low);
    track_cmd->add_option("--iou-gate-stage1", track_args.iou_gate_stage1);
    track_cmd->add_option("--iou-gate-stage2", track_args.iou_gate_stage2);
    track_cmd->add_option("--max-age", track_args.max_age)->check(CLI::Range(0, 100000));
    track_cmd->add_option("--min-hits", track_args.min_hits)->check(CLI::Range(1, 1000));
    track_cmd->add_option("--new-track-score", track_args.new_track_score);
    track_cmd->add_option("--config", track_args.config, "run-config file");

    MergeArgs merge_args;
    auto* merge_cmd = app.add_subcommand("merge", "offline tracklet merging");
    merge_cmd->add_option("--res", merge_args.res, "tracking result file")->required();
    merge_cmd->add_option("--seqinfo", merge_args.seqinfo, "sequence directory")
        ->required();
    merge_cmd->add_option("--model", merge_args.model, "checkpoint")->required();
    merge_cmd->add_option("--max-gap", merge_args.max_gap)->check(CLI::Range(0, 1000000));
    merge_cmd->add_option("--max-dist", merge_args.max_dist)->check(CLI::NonNegativeNumber);
    merge_cmd->add_option("--tau", merge_args.tau)->check(CLI::Range(0.0, 2.0));
    merge_cmd->add_option("--out", merge_args.out, "merged result file")->required();
    merge_cmd->add_option("--report", merge_args.report, "merge report file");
    merge_cmd->add_option("--config", merge_args.config, "run-config file");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "score a result against ground truth");
    eval_cmd->add_option("--gt", eval_args.gt)->required();
    eval_cmd->add_option("--res", eval_args.res)->required();
    eval_cmd->add_option("--metrics", eval_args.metrics, "comma list: hota,mota,idf1");
    eval_cmd->add_option("--csv", eval_args.csv, "also write a CSV report");
    eval_cmd->add_option("--config", eval_args.config, "run-config file");

    CompareArgs compare_args;
    auto* compare_cmd =
        app.add_subcommand("compare", "synth + train + track + eval, ssm vs kalman");
    compare_cmd->add_option("--out", compare_args.out, "output directory")->required();
    compare_cmd->add_option("--kinds", compare_args.kinds);
    compare_cmd->add_option("--objects", compare_args.objects)->check(CLI::Range(1, 10000));
    compare_cmd->add_option("--frames", compare_args.frames)->check(CLI::Range(10, 1000000));
    compare_cmd->add_option("--train-seqs", compare_args.train_seqs)->check(CLI::Range(1, 100));
    compare_cmd->add_option("--epochs", compare_args.epochs)->check(CLI::Range(0, 1000000));
    compare_cmd->add_option("--batch", compare_args.batch)->check(CLI::Range(1, 100000));
    compare_cmd->add_option("--lr", compare_args.lr)->check(CLI::PositiveNumber);
    compare_cmd->add_option("--blocks", compare_args.blocks)->check(CLI::Range(1, 64));
    compare_cmd->add_option("--dim", compare_args.dim)->check(CLI::Range(1, 4096));
    compare_cmd->add_option("--horizons", compare_args.horizons)->check(CLI::Range(1, 50));
    compare_cmd->add_option("--occlusion", compare_args.occlusion)->check(CLI::Range(0.0, 0.99));
    compare_cmd->add_option("--noise", compare_args.noise)->check(CLI::NonNegativeNumber);
    compare_cmd->add_option("--seed", compare_args.seed);
    compare_cmd->add_option("--config", compare_args.config, "run-config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth_cmd->parsed()) return run_synth(synth);
        if (train_cmd->parsed()) return run_train(train_args);
        if (track_cmd->parsed()) return run_track(track_args);
        if (merge_cmd->parsed()) return run_merge(merge_args);
        if (eval_cmd->parsed()) return run_eval(eval_args);
        if (compare_cmd->parsed()) return run_compare(compare_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
