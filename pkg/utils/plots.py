# utils/plots.py
import matplotlib
from matplotlib.figure import Figure

# Fixed salt and no Date entry keep repeated SVGs byte-identical
SVG_RC = {"svg.hashsalt": "coherent", "svg.fonttype": "none"}
SVG_METADATA = {"Date": None}

DEFAULT_COLORS = {
    "line_color": "#5865F2",
    "bar_color": "#57F287",
    "reference_color": "#ED4245",
}


def _color(plot_config: dict, key: str) -> str:
    # config.json stores colours the way the embeds did, e.g. "0x5865F2"
    value = str(plot_config.get(key, DEFAULT_COLORS[key]))
    if value.lower().startswith("0x"):
        return "#" + value[2:]
    return value


def _figure(plot_config: dict) -> tuple[Figure, object]:
    fig = Figure(figsize=(float(plot_config.get("width_in", 6.0)), float(plot_config.get("height_in", 4.0))))
    ax = fig.add_subplot(1, 1, 1)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig: Figure, path: str) -> None:
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata=SVG_METADATA)


def line_chart(path, xs, ys, *, xlabel, ylabel, title, plot_config=None, threshold=None):
    """Single series against x with an optional horizontal threshold line."""
    plot_config = plot_config or {}
    fig, ax = _figure(plot_config)
    ax.plot(list(xs), list(ys), marker="o", color=_color(plot_config, "line_color"))
    if threshold is not None:
        ax.axhline(threshold, linestyle="--", color=_color(plot_config, "reference_color"), label=f"{threshold:g}")
        ax.legend(loc="lower right")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    _save(fig, path)


def bar_chart(path, labels, values, *, xlabel, ylabel, title, plot_config=None, reference=None, reference_label="reference"):
    """Bars per label, with an optional reference series drawn as markers."""
    plot_config = plot_config or {}
    fig, ax = _figure(plot_config)
    positions = list(range(len(labels)))
    ax.bar(positions, list(values), color=_color(plot_config, "bar_color"), label="prepared")
    if reference is not None:
        ax.plot(positions, list(reference), "o--", color=_color(plot_config, "reference_color"), label=reference_label)
        ax.legend(loc="upper right")
    ax.set_xticks(positions)
    ax.set_xticklabels([str(label) for label in labels])
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    _save(fig, path)
