// Command-line front end: synthetic sequence generation, loss injection,
// single-sequence concealment, PSNR measurement, and the full experiment
// runner.

#include "mcfse/conceal.hpp"
#include "mcfse/harness.hpp"
#include "mcfse/loss_model.hpp"
#include "mcfse/psnr.hpp"
#include "mcfse/synthetic.hpp"
#include "mcfse/video_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace mcfse;

struct InputOptions {
    std::string path;
    int width = 0;
    int height = 0;
    std::string chroma = "420";
};

void add_input_options(CLI::App* cmd, InputOptions& opts) {
    cmd->add_option("--input,-i", opts.path, "input video (.y4m or headerless planar YUV)")
        ->required();
    cmd->add_option("--width", opts.width, "frame width (headerless input only)");
    cmd->add_option("--height", opts.height, "frame height (headerless input only)");
    cmd->add_option("--chroma", opts.chroma, "headerless chroma mode: 420 or 400")
        ->check(CLI::IsMember({"420", "400"}));
}

bool is_y4m(const std::string& path) {
    return std::filesystem::path(path).extension() == ".y4m";
}

Sequence load_input(const InputOptions& opts) {
    if (is_y4m(opts.path)) return load_y4m(opts.path);
    if (opts.width <= 0 || opts.height <= 0) {
        throw std::runtime_error("headerless input needs --width and --height");
    }
    return load_raw_yuv(opts.path, opts.width, opts.height,
                        opts.chroma == "400" ? ChromaMode::C400 : ChromaMode::C420);
}

ChromaPlanes load_input_chroma(const InputOptions& opts) {
    if (is_y4m(opts.path)) return load_y4m_chroma(opts.path);
    return load_raw_yuv_chroma(opts.path, opts.width, opts.height,
                               opts.chroma == "400" ? ChromaMode::C400 : ChromaMode::C420);
}

struct PatternOptions {
    std::string pattern_file;
    std::vector<int> frames = {16, 46, 76, 106, 136};
    int block_size = 16;
    int stride_x = 64;
    int stride_y = 64;
    int offset = 16;
};

void add_pattern_options(CLI::App* cmd, PatternOptions& opts) {
    cmd->add_option("--pattern-file", opts.pattern_file,
                    "loss pattern file (`frame x0 y0 size` lines); overrides the grid");
    cmd->add_option("--frames", opts.frames, "0-based frame indices for the loss grid");
    cmd->add_option("--block-size", opts.block_size, "lost block edge length");
    cmd->add_option("--stride-x", opts.stride_x, "horizontal grid stride");
    cmd->add_option("--stride-y", opts.stride_y, "vertical grid stride");
    cmd->add_option("--offset", opts.offset, "grid origin offset");
}

LossMask build_mask(const PatternOptions& opts, const Sequence& seq) {
    if (!opts.pattern_file.empty()) {
        return load_pattern_file(opts.pattern_file, seq.width, seq.height,
                                 seq.frame_count());
    }
    return build_isolated_pattern(seq.width, seq.height, seq.frame_count(), opts.frames,
                                  opts.block_size, opts.stride_x, opts.stride_y,
                                  opts.offset);
}

struct ConcealOptions {
    std::string algorithm = "mcfse";
    ConcealConfig config;
    std::string fft = "64x64x16";
};

void add_conceal_options(CLI::App* cmd, ConcealOptions& opts) {
    cmd->add_option("--algorithm,-a", opts.algorithm, "tr, ebma, dmve, fse3d or mcfse")
        ->check(CLI::IsMember({"tr", "ebma", "dmve", "fse3d", "mcfse"}));
    cmd->add_option("--np", opts.config.prev_frames, "previous frames in the volume");
    cmd->add_option("--nf", opts.config.next_frames, "following frames in the volume");
    cmd->add_option("--border", opts.config.border, "support band width around the block");
    cmd->add_option("--band-width", opts.config.band_width, "motion decision ring width");
    cmd->add_option("--d-max", opts.config.d_max, "fullpel motion search range");
    cmd->add_option("--t-abs", opts.config.t_abs, "absolute reliability threshold");
    cmd->add_option("--t-rel", opts.config.t_rel, "relative reliability threshold");
    cmd->add_option("--rho", opts.config.fse.rho_hat, "isotropic weight decay");
    cmd->add_option("--gamma", opts.config.fse.gamma, "deficiency compensation factor");
    cmd->add_option("--iterations", opts.config.fse.max_iterations, "iteration budget");
    cmd->add_option("--fft", opts.fft, "FFT grid as WxHxD");
    cmd->add_option("--ebma-boundary", opts.config.ebma_boundary_width,
                    "boundary match ring width");
}

ConcealConfig finish_conceal_options(const ConcealOptions& opts) {
    ConcealConfig config = opts.config;
    const auto algorithm = parse_algorithm(opts.algorithm);
    if (!algorithm) throw std::runtime_error("unknown algorithm " + opts.algorithm);
    config.algorithm = *algorithm;
    int w = 0, h = 0, d = 0;
    if (std::sscanf(opts.fft.c_str(), "%dx%dx%d", &w, &h, &d) != 3) {
        throw std::runtime_error("--fft expects WxHxD");
    }
    config.fse.fft_width = w;
    config.fse.fft_height = h;
    config.fse.fft_depth = d;
    return config;
}

void dump_block_csv(const std::filesystem::path& dir, const BlockOutcome& outcome,
                    const FseModel<double>& model, const FseConfig& fse) {
    std::filesystem::create_directories(dir);
    const auto& b = outcome.block;
    const std::filesystem::path path =
        dir / ("block_f" + std::to_string(b.frame) + "_x" + std::to_string(b.x0) + "_y" +
               std::to_string(b.y0) + ".csv");
    std::ofstream out(path, std::ios::trunc);
    const GridDims dims = fse.grid();
    out << "iteration,bin,km,kn,kp,coeff_re,coeff_im,residual_energy\n";
    out << "0,,,,,,," << model.residual_energy[0] << "\n";
    for (std::size_t i = 0; i < model.chosen.size(); ++i) {
        const auto& choice = model.chosen[i];
        int km, kn, kp;
        dims.split(choice.bin, km, kn, kp);
        out << choice.iteration << "," << choice.bin << "," << km << "," << kn << "," << kp
            << "," << choice.coeff.real() << "," << choice.coeff.imag() << ","
            << model.residual_energy[i + 1] << "\n";
    }
}

int cmd_synth(const std::string& kind, int width, int height, int frames, int dx, int dy,
              int step, int cut_frame, unsigned seed, int noise,
              const std::string& output) {
    Sequence seq;
    if (kind == "translate") {
        seq = make_translating(width, height, frames, dx, dy, seed, noise);
    } else if (kind == "static") {
        seq = make_static(width, height, frames, seed);
    } else if (kind == "constant") {
        seq = make_constant(width, height, frames, 128);
    } else if (kind == "zoom") {
        seq = make_zoom(width, height, frames, step, seed);
    } else if (kind == "scenecut") {
        seq = make_scene_cut(width, height, frames, cut_frame, seed);
    } else {
        throw std::runtime_error("unknown synthetic kind " + kind);
    }
    write_y4m(seq, output);
    std::cout << "wrote " << output << " (" << width << "x" << height << ", " << frames
              << " frames)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-loss concealment by frequency-selective extrapolation"};
    app.require_subcommand(1);

    // --- experiment ---
    auto* experiment = app.add_subcommand(
        "experiment", "run the full multi-algorithm PSNR comparison");
    std::string config_path;
    std::vector<std::string> overrides;
    std::vector<std::string> extra_inputs;
    experiment->add_option("--config,-c", config_path, "key=value experiment config file");
    experiment->add_option("--input,-i", extra_inputs,
                           "additional input spec name:path[:WxH[:420|400]]");
    experiment->add_option(
        "--set,-s", overrides,
        "override any config key, e.g. --set iterations=200 --set trace=1");

    // --- conceal ---
    auto* conceal = app.add_subcommand("conceal",
                                       "corrupt one sequence and conceal it again");
    InputOptions conceal_input;
    PatternOptions conceal_pattern;
    ConcealOptions conceal_opts;
    std::string conceal_output = "concealed.y4m";
    std::string corrupted_output;
    std::string debug_dir;
    bool already_corrupted = false;
    add_input_options(conceal, conceal_input);
    add_pattern_options(conceal, conceal_pattern);
    add_conceal_options(conceal, conceal_opts);
    conceal->add_option("--output,-o", conceal_output, "concealed Y4M path");
    conceal->add_option("--write-corrupted", corrupted_output,
                        "also write the corrupted stream");
    conceal->add_option("--debug-dir", debug_dir,
                        "per-block CSV dumps of chosen coefficients and residual energy");
    conceal->add_flag("--already-corrupted", already_corrupted,
                      "input already has the losses zero-filled (skip corruption and PSNR)");

    // --- corrupt ---
    auto* corrupt = app.add_subcommand("corrupt", "cut the loss pattern out of a sequence");
    InputOptions corrupt_input;
    PatternOptions corrupt_pattern;
    std::string corrupt_output = "corrupted.y4m";
    std::string corrupt_pattern_out;
    add_input_options(corrupt, corrupt_input);
    add_pattern_options(corrupt, corrupt_pattern);
    corrupt->add_option("--output,-o", corrupt_output, "corrupted Y4M path");
    corrupt->add_option("--write-pattern", corrupt_pattern_out,
                        "write the applied pattern as a pattern file");

    // --- psnr ---
    auto* psnr = app.add_subcommand("psnr", "pooled PSNR over the lost pixels");
    InputOptions psnr_original;
    std::string psnr_test;
    PatternOptions psnr_pattern;
    add_input_options(psnr, psnr_original);
    psnr->add_option("--test", psnr_test, "concealed sequence (.y4m)")->required();
    add_pattern_options(psnr, psnr_pattern);

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "generate deterministic test sequences");
    std::string synth_kind = "translate";
    int synth_w = 352, synth_h = 288, synth_frames = 150;
    int synth_dx = 4, synth_dy = 0, synth_step = 1, synth_cut = 5, synth_noise = 0;
    unsigned synth_seed = 1;
    std::string synth_output = "synthetic.y4m";
    synth->add_option("--kind", synth_kind,
                      "translate, static, constant, zoom or scenecut")
        ->check(CLI::IsMember({"translate", "static", "constant", "zoom", "scenecut"}));
    synth->add_option("--width", synth_w, "frame width");
    synth->add_option("--height", synth_h, "frame height");
    synth->add_option("--frames", synth_frames, "frame count");
    synth->add_option("--dx", synth_dx, "horizontal shift per frame (translate)");
    synth->add_option("--dy", synth_dy, "vertical shift per frame (translate)");
    synth->add_option("--step", synth_step, "zoom crop step per frame");
    synth->add_option("--cut-frame", synth_cut, "first frame of the second scene");
    synth->add_option("--seed", synth_seed, "texture seed");
    synth->add_option("--noise", synth_noise, "per-frame noise amplitude (translate)");
    synth->add_option("--output,-o", synth_output, "output Y4M path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (experiment->parsed()) {
            ExperimentConfig config;
            if (!config_path.empty()) config = load_experiment_config(config_path);
            for (const std::string& spec : extra_inputs) {
                apply_config_entry(config, "input", spec);
            }
            for (const std::string& entry : overrides) {
                const auto eq = entry.find('=');
                if (eq == std::string::npos) {
                    throw std::runtime_error("--set expects key=value, got `" + entry + "`");
                }
                apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
            }
            const ExperimentReport report = run_experiment(config);
            print_report_summary(report, std::cout);
            std::cout << "reports written to " << config.output_dir.string() << "\n";
            return report.warnings.empty() ? 0 : 2;
        }

        if (conceal->parsed()) {
            const Sequence input = load_input(conceal_input);
            const ChromaPlanes chroma = load_input_chroma(conceal_input);
            const LossMask mask = build_mask(conceal_pattern, input);
            const ConcealConfig config = finish_conceal_options(conceal_opts);
            const Sequence corrupted = already_corrupted ? input : apply_loss(input, mask);
            if (!corrupted_output.empty()) {
                write_y4m(corrupted, corrupted_output, &chroma);
            }

            BlockObserver observer;
            if (!debug_dir.empty()) {
                observer = [&](const BlockOutcome& outcome, const VolumeD&,
                               const FseModel<double>& model) {
                    dump_block_csv(debug_dir, outcome, model, config.fse);
                };
            }
            const ConcealResult result =
                conceal_sequence(corrupted, mask, config, observer);
            write_y4m(result.sequence, conceal_output, &chroma);

            std::cout << "concealed " << mask.blocks.size() << " blocks with "
                      << algorithm_name(config.algorithm);
            if (result.failed_blocks() > 0) {
                std::cout << " (" << result.failed_blocks() << " failed)";
            }
            std::cout << " -> " << conceal_output << "\n";
            if (!already_corrupted) {
                const PsnrResult quality = psnr_lost_pixels(input, result.sequence, mask);
                std::cout << "PSNR over lost pixels: " << format_psnr(quality) << " dB\n";
            }
            for (const BlockOutcome& outcome : result.blocks) {
                if (!outcome.ok) {
                    std::cerr << "block f" << outcome.block.frame << " (" << outcome.block.x0
                              << "," << outcome.block.y0 << ") failed: " << outcome.error
                              << "\n";
                }
            }
            return 0;
        }

        if (corrupt->parsed()) {
            const Sequence input = load_input(corrupt_input);
            const ChromaPlanes chroma = load_input_chroma(corrupt_input);
            const LossMask mask = build_mask(corrupt_pattern, input);
            write_y4m(apply_loss(input, mask), corrupt_output, &chroma);
            if (!corrupt_pattern_out.empty()) write_pattern_file(mask, corrupt_pattern_out);
            std::cout << "cut " << mask.blocks.size() << " blocks -> " << corrupt_output
                      << "\n";
            return 0;
        }

        if (psnr->parsed()) {
            const Sequence original = load_input(psnr_original);
            const Sequence test = load_y4m(psnr_test);
            const LossMask mask = build_mask(psnr_pattern, original);
            const PsnrResult quality = psnr_lost_pixels(original, test, mask);
            std::cout << format_psnr(quality, 4) << " dB over " << quality.lost_pixels
                      << " lost pixels\n";
            return 0;
        }

        if (synth->parsed()) {
            return cmd_synth(synth_kind, synth_w, synth_h, synth_frames, synth_dx, synth_dy,
                             synth_step, synth_cut, synth_seed, synth_noise, synth_output);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
