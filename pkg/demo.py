"""
Demo script for ideaflow

Plants idea flows in a synthetic word graph, recovers them, scores the
result and renders the stripe diagram.
"""

from dataclasses import replace

from ideaflow import (
    ConfigurationError,
    EmptyTensorError,
    RunConfig,
    SynthConfig,
    evaluate_run,
    generate_graph,
    generate_ground_truth,
    summarize_leadership,
    track_idea_flows,
    __version__
)
from ideaflow.render import write_svg


def print_section(title):
    """Print a formatted section header"""
    print(f"\n{'='*60}")
    print(f"  {title}")
    print(f"{'='*60}\n")


def demo_ground_truth(cfg):
    """Plant ideas and flows"""
    print_section("Planted Ground Truth")
    truth = generate_ground_truth(cfg)
    print(f"Ideas: {truth.k_a} in group A, {truth.k_b} in group B")
    print(f"Words: {truth.labels_a.size} in group A, {truth.labels_b.size} in group B")
    for flow in truth.report.flows:
        for s in flow.segments:
            if s.c_bar == 1:
                print(f"  A{flow.idea_a} -> B{flow.idea_b}: points {s.k_start}-{s.k_end}, lead {s.dt_bar:+.0f}")
    return truth


def demo_recovery(truth, cfg):
    """Extract flows from the noisy graph and score them"""
    print_section(f"Recovery at noise level {cfg.noise_level}")
    graph = generate_graph(truth, cfg)
    print(f"Graph: {len(graph.edges)} correlated word pairs over T={graph.T}")

    flow_cfg = RunConfig(seed=cfg.seed).flow(k_a=truth.k_a, k_b=truth.k_b)
    report = track_idea_flows(graph, flow_cfg)
    metrics = evaluate_run(report, truth)
    for name, value in metrics.to_dict().items():
        print(f"  {name}: {value}")

    leadership = summarize_leadership(report)
    print(f"\nLeaders: {leadership.counts}")
    return report


def demo_error_handling():
    """Show the error raised for an impossible request"""
    print_section("Error Handling")
    try:
        generate_ground_truth(SynthConfig(T=10, tau_max=3, period_length=(20, 40), max_retries=2))
    except ConfigurationError as e:
        print(f"ConfigurationError: {e}")


def main():
    """Main demo function"""
    print("\n" + "="*60)
    print(" "*18 + f"IDEAFLOW {__version__} DEMO")
    print("="*60)

    cfg = SynthConfig(ideas_per_group=(2, 3), words_per_idea=(5, 10), T=120, seed=7)
    truth = demo_ground_truth(cfg)
    try:
        demo_recovery(truth, cfg)
        report = demo_recovery(truth, replace(cfg, noise_level=0.4))
    except EmptyTensorError as e:
        print(f"No flows to extract: {e}")
    else:
        write_svg('demo_flows.svg', report)
        print("\nWrote demo_flows.svg")
    demo_error_handling()

    print("\n" + "="*60)
    print("  Demo completed successfully!")
    print("="*60 + "\n")


if __name__ == "__main__":
    main()
