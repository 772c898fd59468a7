# import objects
from .ppm import read_ppm, parse_ppm, write_ppm, load_image, write_image, to_pixels
from .manifest import MANIFEST_VERSION, ManifestEntry, DatasetManifest
from .manifest import load_manifest, parse_manifest, save_manifest, split_manifest
from .resize import resize, resize_array, sample_bilinear, rescale_objects
from .synth import MANIFEST_FILE, SynthConfig, object_axes, synthesize, gen_synthetic
from .dataset import Dataset, load_dataset, synthetic_dataset
