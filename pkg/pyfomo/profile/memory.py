# import modules
import numpy
from ..enums import *
from ..errors import ConfigError

# define regions
PING = 0
PONG = 1


class BufferRecord(object):
    """
    Holds activation buffers of single layer execution.
    
    Attributes:
        
        Name: str
            Layer name.
        
        Kind: str
            Layer kind.
        
        InputBytes: int
            Size of the consumed buffer.
        
        OutputBytes: int
            Size of the produced buffer.
        
        LiveBytes: int
            Size of all buffers live during execution.
        
        Buffers: {str: (int, int)}
            Live buffers as (offset, size) by tensor name.
    """
    
    
    def __init__(self, name, kind, input_bytes, output_bytes, buffers):
        """Initializes a new instance of BufferRecord."""
        
        self.Name = name
        self.Kind = kind
        self.InputBytes = int(input_bytes)
        self.OutputBytes = int(output_bytes)
        self.Buffers = dict(buffers)
        self.LiveBytes = sum(size for offset, size in self.Buffers.values())
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "BufferRecord(%s, live=%d)" % (self.Name, self.LiveBytes)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'name': self.Name,
            'kind': self.Kind,
            'input_bytes': self.InputBytes,
            'output_bytes': self.OutputBytes,
            'live_bytes': self.LiveBytes,
            'buffers': {k: list(v) for k, v in self.Buffers.items()}}


class MemoryPlan(object):
    """
    Holds the activation arena plan of a model. The peak covers activations
    only, weights are reported separately.
    
    Attributes:
        
        Layers: (pyfomo.BufferRecord,)
            Per-layer buffer records in execution order.
        
        PeakBytes: int
            Maximum live bytes over layers.
        
        ArenaBytes: int
            Total size of all arena regions.
        
        WeightBytes: int
            Size of weights and biases.
        
        ItemSize: int
            Bytes per activation element.
    """
    
    
    def __init__(self, layers, arena_bytes, weight_bytes, item_size):
        """Initializes a new instance of MemoryPlan."""
        
        self.Layers = tuple(layers)
        self.ArenaBytes = int(arena_bytes)
        self.WeightBytes = int(weight_bytes)
        self.ItemSize = int(item_size)
        self.PeakBytes = max(l.LiveBytes for l in self.Layers) if self.Layers else 0
    
    
    def __repr__(self):
        """Gets debug string representation."""
        
        return "MemoryPlan(peak=%d, arena=%d, weights=%d)" % (self.PeakBytes, self.ArenaBytes, self.WeightBytes)
    
    
    def ToJSON(self):
        """Converts current data to JSON-like object."""
        
        return {
            'peak_bytes': self.PeakBytes,
            'arena_bytes': self.ArenaBytes,
            'weight_bytes': self.WeightBytes,
            'item_size': self.ItemSize,
            'layers': [l.ToJSON() for l in self.Layers]}
    
    
    def ToText(self):
        """Creates human-readable per-layer table."""
        
        lines = ["%-24s %-12s %10s %10s %10s" % ("layer", "kind", "in B", "out B", "live B")]
        
        for l in self.Layers:
            lines.append("%-24s %-12s %10d %10d %10d" % (l.Name, l.Kind, l.InputBytes, l.OutputBytes, l.LiveBytes))
        
        lines.append("peak %d B (%.1f KB), arena %d B, weights %d B" % (self.PeakBytes, self.PeakBytes / 1024., self.ArenaBytes, self.WeightBytes))
        
        return "\n".join(lines)


def plan_buffers(layers, input_shape, item_size):
    """
    Plans activation buffers of a layer chain. Consecutive activations
    alternate between two ping-pong regions, tensors consumed later by
    residual additions stay in dedicated regions until consumed.
    
    Args:
        layers: (pyfomo.model.Layer,)
            Layers in execution order.
        
        input_shape: (int, int, int, int)
            Input dimensions.
        
        item_size: int
            Bytes per activation element.
    
    Returns:
        (pyfomo.BufferRecord,), int
            Per-layer records and total arena size.
    """
    
    # get shapes and last use of skip sources
    shapes = {INPUT_TENSOR: tuple(input_shape)}
    consumers = {}
    
    shape = tuple(input_shape)
    for i, layer in enumerate(layers):
        shape = layer.OutputShape(shape)
        shapes[layer.Name] = shape
        if layer.Skip:
            consumers[layer.Skip] = max(consumers.get(layer.Skip, i), i)
    
    sizes = {k: int(numpy.prod(v)) * item_size for k, v in shapes.items()}
    
    # assign regions
    region = {INPUT_TENSOR: PING if INPUT_TENSOR not in consumers else 2}
    region_sizes = {PING: 0, PONG: 0}
    held = {}
    
    if INPUT_TENSOR in consumers:
        held[INPUT_TENSOR] = 2
    
    steps = []
    current = INPUT_TENSOR
    
    for i, layer in enumerate(layers):
        
        name = layer.Name
        
        # choose output region
        if name in consumers:
            busy = set(held.values())
            out_region = 2
            while out_region in busy:
                out_region += 1
        else:
            out_region = PONG if region[current] == PING else PING
        
        region[name] = out_region
        
        # collect live buffers
        live = [current, name] + [k for k in held if k not in (current, name)]
        steps.append((layer, current, name, live))
        
        for k in live:
            region_sizes[region[k]] = max(region_sizes.get(region[k], 0), sizes[k])
        
        # release consumed skip sources
        for k in list(held):
            if consumers[k] <= i:
                del held[k]
        
        if name in consumers:
            held[name] = out_region
        
        current = name
    
    # get region offsets
    offsets = {}
    offset = 0
    for r in sorted(region_sizes):
        offsets[r] = offset
        offset += region_sizes[r]
    
    # make records
    records = []
    for layer, src, dst, live in steps:
        buffers = {k: (offsets[region[k]], sizes[k]) for k in live}
        records.append(BufferRecord(layer.Name, layer.Kind, sizes[src], sizes[dst], buffers))
    
    return tuple(records), offset


def plan_memory(model):
    """
    Plans peak activation memory of single-image inference.
    
    Args:
        model: pyfomo.FomoModel
            Model to plan.
    
    Returns:
        pyfomo.MemoryPlan
            Memory plan.
    """
    
    item_size = 1 if model.IsQuantized else 4
    records, arena = plan_buffers(model.Layers, model.InputShape, item_size)
    
    return MemoryPlan(records, arena, model.WeightBytes, item_size)


def count_macs(model):
    """
    Counts multiply-accumulate operations of single-image inference.
    
    Args:
        model: pyfomo.FomoModel
            Model to count.
    
    Returns:
        int
            Number of MACs.
    """
    
    total = 0
    shape = model.InputShape
    
    for layer in model.Layers:
        total += layer.Macs(shape)
        shape = layer.OutputShape(shape)
    
    return int(total)
