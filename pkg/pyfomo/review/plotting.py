# import modules
from io import StringIO
import numpy
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from matplotlib.ticker import AutoMinorLocator
from ..enums import EMPHASIS

# define colors
LOSS_COLOR = "#1f77b4"
F1_COLOR = "#d62728"
EMPHASIS_COLOR = "#ffbb7830"
GRID_COLORS = ("#e6e6e6ff", "#f5f5f5ff")

# define fonts
LABEL_FONT = {'fontsize': 9, 'fontweight': 'bold'}
TICK_SIZE = 8


def prepare(x_label="", y_label="", width=800, height=200, dpi=72, grid=True):
    """
    Creates figure of given pixel size with a single styled axes.
    
    Args:
        x_label: str
            X-axis label.
        
        y_label: str
            Y-axis label.
        
        width: int
            Image width in pixels.
        
        height: int
            Image height in pixels.
        
        dpi: int
            Image DPI.
        
        grid: bool
            Draws major and minor gridlines.
    
    Returns:
        (matplotlib.figure.Figure, matplotlib.axes.Axes)
            Figure and its axes.
    """
    
    fig, ax = plt.subplots(figsize=(width/dpi, height/dpi), dpi=dpi)
    style_axes(ax, x_label, y_label)
    
    if grid:
        ax.xaxis.set_minor_locator(AutoMinorLocator())
        ax.yaxis.set_minor_locator(AutoMinorLocator())
        ax.set_axisbelow(True)
        
        for which, color in zip(('major', 'minor'), GRID_COLORS):
            ax.grid(axis='both', which=which, linewidth=1, color=color)
    
    return fig, ax


def style_axes(ax, x_label=None, y_label=None):
    """Applies label fonts and tick size to given axes."""
    
    if x_label is not None:
        ax.set_xlabel(x_label, **LABEL_FONT)
    
    if y_label is not None:
        ax.set_ylabel(y_label, **LABEL_FONT)
    
    ax.tick_params(axis='both', labelsize=TICK_SIZE)


def svg(fig):
    """
    Renders figure as SVG code and releases it.
    
    Args:
        fig: matplotlib.figure.Figure
            Figure to render.
    
    Returns:
        str
            SVG code.
    """
    
    fig.tight_layout()
    
    with StringIO() as buff:
        fig.savefig(buff, format='svg')
        code = buff.getvalue()
    
    plt.close(fig)
    
    return code


def save(code, path):
    """Writes SVG code into file."""
    
    with open(path, 'w', encoding='utf-8') as wf:
        wf.write(code)


def plot_history(history, width=800, height=250):
    """
    Plots training loss and validation F1 per epoch.
    
    Args:
        history: pyfomo.TrainHistory
            Training history.
        
        width: int
            Image width.
        
        height: int
            Image height.
    
    Returns:
        str
            SVG code.
    """
    
    fig, ax = prepare("epoch", "loss", width, height)
    epochs = numpy.arange(len(history))
    
    ax.plot(epochs, history.Losses, color=LOSS_COLOR, linewidth=1, label="loss")
    
    # add validation score on secondary axis
    scores = [(i, f1) for i, f1 in enumerate(history.ValidationF1) if f1 is not None]
    if scores:
        
        ax2 = ax.twinx()
        ax2.plot([x[0] for x in scores], [x[1] for x in scores], color=F1_COLOR, linewidth=1, label="val F1")
        ax2.set_ylim(0, 1)
        style_axes(ax2, y_label="val F1")
        
        if history.BestEpoch is not None:
            ax2.axvline(history.BestEpoch, color=F1_COLOR, linewidth=1, linestyle=':')
    
    return svg(fig)


def plot_heatmap(heatmap, detections=(), cell_size=8, width=400, height=400):
    """
    Plots foreground probability of every cell with decoded centroids.
    
    Args:
        heatmap: pyfomo.GridHeatmap
            Model output.
        
        detections: (pyfomo.Detection,)
            Decoded detections.
        
        cell_size: int
            Cell size in input pixels.
        
        width: int
            Image width.
        
        height: int
            Image height.
    
    Returns:
        str
            SVG code.
    """
    
    fig, ax = prepare("x", "y", width, height, grid=False)
    
    # show max foreground probability
    probs = heatmap.Array[..., 1:].max(axis=-1)
    extent = (0, heatmap.GridW * cell_size, heatmap.GridH * cell_size, 0)
    image = ax.imshow(probs, cmap='viridis', vmin=0, vmax=1, extent=extent, interpolation='nearest')
    fig.colorbar(image, ax=ax)
    
    # add centroids
    for det in detections:
        ax.plot(det.X, det.Y, marker='+', color='white', markersize=10)
        ax.text(det.X + 2, det.Y - 2, "%d: %.2f" % (det.ClassId, det.Confidence), color='white', fontsize=7)
    
    return svg(fig)


def plot_trajectory(reports, width=800, height=300):
    """
    Plots window position against frame for one or more episodes, emphasis
    frames are shaded.
    
    Args:
        reports: (pyfomo.SimReport,)
            Episode reports.
        
        width: int
            Image width.
        
        height: int
            Image height.
    
    Returns:
        str
            SVG code.
    """
    
    fig, ax = prepare("frame", "position", width, height)
    
    for report in reports:
        
        frames = [x[0] for x in report.Trajectory]
        positions = [x[1] for x in report.Trajectory]
        label = report.EFKind if report.EFEnabled else "off"
        ax.plot(frames, positions, linewidth=1, label=label)
        
        # shade emphasis
        for frame, _, _, _, _, mode, _, _ in report.Trajectory:
            if mode == EMPHASIS:
                ax.axvspan(frame - 0.5, frame + 0.5, color=EMPHASIS_COLOR, linewidth=0)
    
    if reports:
        ax.legend(fontsize=TICK_SIZE)
    
    return svg(fig)
