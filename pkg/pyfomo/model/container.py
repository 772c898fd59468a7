# import modules
import os.path
import json
import struct
import zlib
import numpy
from ..enums import *
from ..errors import ContainerError, MagicError, TruncatedError, ChecksumError
from ..tensor import QuantParams
from .config import ModelConfig
from .layers import create_layer
from .fomo import FomoModel

# define container constants
MAGIC = b"LVTX1"
LENGTH_FORM = '<I'
LENGTH_SIZE = struct.calcsize(LENGTH_FORM)

# define blob types
F32_DTYPE = '<f4'
INT8_DTYPE = '|i1'
INT32_DTYPE = '<i4'


def save_model(model, path):
    """
    Writes model into LVTX1 container.
    
    The container starts with the magic bytes, followed by the length of the
    UTF-8 JSON header, the header itself, little-endian weight blobs at the
    offsets declared in the header and the CRC-32 of everything before it.
    
    Args:
        model: pyfomo.FomoModel
            Model to save.
        
        path: str
            Output file path.
    """
    
    data = dump_model(model)
    
    with open(path, 'wb') as wf:
        wf.write(data)


def dump_model(model):
    """
    Serializes model into LVTX1 bytes.
    
    Args:
        model: pyfomo.FomoModel
            Model to serialize.
    
    Returns:
        bytes
            Container data.
    """
    
    blobs = bytearray()
    layers = []
    
    # serialize layers
    for layer in model.Layers:
        
        item = layer.ToJSON()
        item['blobs'] = {}
        
        if layer.Weights is not None:
            dtype = INT8_DTYPE if layer.IsQuantized else F32_DTYPE
            item['blobs']['weights'] = _append_blob(blobs, layer.Weights, dtype)
        
        if layer.Bias is not None:
            dtype = INT32_DTYPE if layer.IsQuantized else F32_DTYPE
            item['blobs']['bias'] = _append_blob(blobs, layer.Bias, dtype)
        
        layers.append(item)
    
    # make header
    header = {
        'format': model.FormatTag,
        'config': model.Config.ToJSON(),
        'input_params': model.InputParams.ToJSON() if model.InputParams else None,
        'layers': layers,
        'blob_bytes': len(blobs)}
    
    header = json.dumps(header, ensure_ascii=False, sort_keys=True).encode('utf-8')
    
    # make container
    data = bytearray(MAGIC)
    data += struct.pack(LENGTH_FORM, len(header))
    data += header
    data += blobs
    data += struct.pack(LENGTH_FORM, zlib.crc32(data) & 0xffffffff)
    
    return bytes(data)


def load_model(path):
    """
    Reads model from LVTX1 container.
    
    Args:
        path: str
            Container file path.
    
    Returns:
        pyfomo.FomoModel
            Loaded model.
    """
    
    # check file
    if not os.path.exists(path):
        message = "Model file not found! --> '%s'" % path
        raise IOError(message)
    
    with open(path, 'rb') as rf:
        data = rf.read()
    
    return parse_model(data)


def parse_model(data):
    """
    Deserializes model from LVTX1 bytes. No model is returned unless the
    whole container is consistent.
    
    Args:
        data: bytes
            Container data.
    
    Returns:
        pyfomo.FomoModel
            Loaded model.
    """
    
    data = bytes(data)
    
    # check magic
    if data[:len(MAGIC)] != MAGIC:
        message = "Not an LVTX1 container! --> '%s'" % data[:len(MAGIC)]
        raise MagicError(message)
    
    # get header
    start = len(MAGIC) + LENGTH_SIZE
    if len(data) < start + LENGTH_SIZE:
        message = "Container is truncated! --> '%d' bytes" % len(data)
        raise TruncatedError(message)
    
    header_size = struct.unpack(LENGTH_FORM, data[len(MAGIC):start])[0]
    if len(data) < start + header_size + LENGTH_SIZE:
        message = "Container header is truncated! --> '%d' bytes declared" % header_size
        raise TruncatedError(message)
    
    try:
        header = json.loads(data[start:start+header_size].decode('utf-8'))
        blob_size = int(header['blob_bytes'])
    
    except (ValueError, KeyError, TypeError):
        _check_crc(data)
        message = "Container header is invalid!"
        raise ContainerError(message)
    
    # check size
    blob_start = start + header_size
    expected = blob_start + blob_size + LENGTH_SIZE
    if len(data) < expected:
        message = "Container blobs are truncated! --> '%d' vs '%d' bytes" % (len(data), expected)
        raise TruncatedError(message)
    
    if len(data) > expected:
        message = "Container has trailing data! --> '%d' vs '%d' bytes" % (len(data), expected)
        raise ContainerError(message)
    
    # check checksum
    _check_crc(data)
    
    # read model
    blobs = data[blob_start:blob_start+blob_size]
    
    try:
        return _make_model(header, blobs)
    
    except (KeyError, TypeError) as e:
        message = "Container header is incomplete! --> '%s'" % e
        raise ContainerError(message)


def _append_blob(blobs, array, dtype):
    """Appends array data to blobs and gets its description."""
    
    raw = numpy.ascontiguousarray(array).astype(dtype).tobytes()
    
    item = {
        'dtype': dtype,
        'shape': list(array.shape),
        'offset': len(blobs),
        'size': len(raw)}
    
    blobs += raw
    
    return item


def _read_blob(blobs, item):
    """Reads array from blobs by its description."""
    
    offset, size = item['offset'], item['size']
    
    if offset < 0 or offset + size > len(blobs):
        message = "Blob is outside of the container! --> '%d:%d'" % (offset, offset+size)
        raise TruncatedError(message)
    
    array = numpy.frombuffer(blobs[offset:offset+size], dtype=item['dtype'])
    
    return array.reshape(item['shape'])


def _check_crc(data):
    """Checks trailing checksum."""
    
    stored = struct.unpack(LENGTH_FORM, data[-LENGTH_SIZE:])[0]
    actual = zlib.crc32(data[:-LENGTH_SIZE]) & 0xffffffff
    
    if stored != actual:
        message = "Container checksum mismatch! --> '%08x' vs '%08x'" % (stored, actual)
        raise ChecksumError(message)


def _make_model(header, blobs):
    """Creates model from parsed header and blobs."""
    
    config = ModelConfig.FromJSON(header['config'])
    input_params = header.get('input_params')
    
    layers = []
    for item in header['layers']:
        
        weight_params = item.get('weight_params')
        output_params = item.get('output_params')
        
        args = {
            'name': item['name'],
            'stride': item['stride'],
            'padding': item['padding'],
            'skip': item.get('skip'),
            'weight_params': QuantParams.FromJSON(weight_params) if weight_params else None,
            'output_params': QuantParams.FromJSON(output_params) if output_params else None}
        
        if 'weights' in item['blobs']:
            args['weights'] = _read_blob(blobs, item['blobs']['weights'])
        
        if 'bias' in item['blobs']:
            args['bias'] = _read_blob(blobs, item['blobs']['bias'])
        
        layers.append(create_layer(item['kind'], **args))
    
    return FomoModel(
        config = config,
        layers = layers,
        format_tag = header['format'],
        input_params = QuantParams.FromJSON(input_params) if input_params else None)
