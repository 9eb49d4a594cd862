#include <cstdio>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "otcolor/metrics.hpp"
#include "otcolor/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitDimension = 3;

struct JobSpec {
    std::string source;
    std::string target;
    std::string flow;
    std::string out;
    std::string trace;
    std::string report;
    std::string ground_truth;
    otc::TransferConfig cfg;
};

int cmd_transfer(const JobSpec& spec) {
    const otc::ImageF source = otc::load_image(spec.source);
    const otc::ImageF target = otc::load_image(spec.target);

    otc::FlowField flow;
    const otc::FlowField* flow_ptr = nullptr;
    if (!spec.flow.empty()) {
        flow = otc::load_flo(spec.flow);
        flow_ptr = &flow;
    }

    const otc::TransferResult result =
        otc::transfer_images(source, target, flow_ptr, spec.cfg);
    otc::save_image(result.image, spec.out);

    if (!spec.trace.empty()) otc::write_trace_csv(result.trace, spec.trace);
    if (!spec.report.empty()) {
        const otc::ImageF truth = otc::load_image(spec.ground_truth);
        otc::write_report(otc::compare_images(result.image, truth), spec.report);
    }

    if (!result.trace.empty())
        std::printf("transfer: %zu iterations, final sliced distance %.6g\n",
                    result.trace.size(), result.trace.back().sliced_distance);
    return kExitOk;
}

int cmd_metrics(const std::string& a_path, const std::string& b_path, const std::string& out) {
    const otc::ImageF a = otc::load_image(a_path);
    const otc::ImageF b = otc::load_image(b_path);
    const otc::MetricReport report = otc::compare_images(a, b);
    otc::write_report(report, out);
    std::printf("psnr=%.6g ssim=%.6g\n", report.psnr_db, report.ssim);
    return kExitOk;
}

int cmd_mosaic(const std::string& a_path, const std::string& b_path, int strip,
               const std::string& out) {
    const otc::ImageF a = otc::load_image(a_path);
    const otc::ImageF b = otc::load_image(b_path);
    otc::save_image(otc::mosaic_interleave(a, b, strip), out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recolours a source image to match a target of the same scene by "
                 "sliced optimal transport over flow-augmented patch features"};
    app.require_subcommand(1);

    JobSpec spec;
    CLI::App* transfer = app.add_subcommand("transfer", "Run the recolouring pipeline");
    transfer->add_option("--source", spec.source, "Source image (PNG or PPM)")->required();
    transfer->add_option("--target", spec.target, "Target image (PNG or PPM)")->required();
    transfer->add_option("--flow", spec.flow,
                         "Middlebury .flo correspondence field for the target "
                         "(identity flow when omitted)");
    transfer->add_option("--out", spec.out, "Output image path")->required();
    transfer->add_option("--k", spec.cfg.patch_size, "Patch side length (odd)")
        ->capture_default_str();
    transfer->add_option("--stretch", spec.cfg.stretch, "Spatial stretch factor")
        ->capture_default_str();
    transfer->add_option("--bandwidth", spec.cfg.bandwidth, "Smoothing bandwidth h")
        ->capture_default_str();
    transfer
        ->add_option("--mode", spec.cfg.mode, "1D transport solver")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, otc::TransportMode>{{"swd", otc::TransportMode::Swd},
                                                      {"idt", otc::TransportMode::Idt}},
            CLI::ignore_case))
        ->default_str("swd");
    transfer->add_option("--iters", spec.cfg.iterations, "Iteration budget")
        ->capture_default_str();
    transfer->add_option("--dirs", spec.cfg.directions_per_iteration,
                         "Projection directions per iteration")
        ->capture_default_str();
    transfer->add_option("--bins", spec.cfg.histogram_bins, "Histogram bins (idt mode)")
        ->capture_default_str();
    transfer->add_option("--seed", spec.cfg.seed, "RNG seed")->capture_default_str();
    transfer->add_flag_callback(
        "--no-nw", [&spec] { spec.cfg.nw_enabled = false; }, "Disable map smoothing");
    transfer->add_flag("--nw-final", spec.cfg.nw_final_only,
                       "Smooth only the final iteration");
    transfer->add_option("--cap", spec.cfg.solve_cap,
                         "Max patches used to fit each 1D map")
        ->capture_default_str();
    transfer->add_option("--trace", spec.trace, "Write per-iteration distances as CSV");
    CLI::Option* report_opt =
        transfer->add_option("--report", spec.report, "Write metrics vs a ground-truth image");
    CLI::Option* truth_opt =
        transfer->add_option("--ground-truth", spec.ground_truth, "Ground-truth image");
    report_opt->needs(truth_opt);
    truth_opt->needs(report_opt);

    std::string metrics_a, metrics_b, metrics_out;
    CLI::App* metrics = app.add_subcommand("metrics", "Compare two images (PSNR, SSIM)");
    metrics->add_option("a", metrics_a, "First image")->required();
    metrics->add_option("b", metrics_b, "Second image")->required();
    metrics->add_option("--out", metrics_out, "Report path (.csv or .json)")->required();

    std::string mosaic_a, mosaic_b, mosaic_out;
    int mosaic_strip = 0;
    CLI::App* mosaic = app.add_subcommand("mosaic", "Interleave two images column-wise");
    mosaic->add_option("a", mosaic_a, "First image")->required();
    mosaic->add_option("b", mosaic_b, "Second image")->required();
    mosaic->add_option("--strip", mosaic_strip, "Strip width in pixels")->required();
    mosaic->add_option("--out", mosaic_out, "Output image path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (transfer->parsed()) return cmd_transfer(spec);
        if (metrics->parsed()) return cmd_metrics(metrics_a, metrics_b, metrics_out);
        return cmd_mosaic(mosaic_a, mosaic_b, mosaic_strip, mosaic_out);
    } catch (const otc::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const otc::FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return kExitIo;
    } catch (const otc::DimensionError& e) {
        std::fprintf(stderr, "dimension error: %s\n", e.what());
        return kExitDimension;
    } catch (const otc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitDimension;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
}
