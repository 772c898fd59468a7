# import modules
import os.path
import sys
import json
import logging
import argparse
from .enums import *
from .errors import ConfigError
from .model import ModelConfig, build_fomo, save_model, load_model
from .train import TrainConfig, split_dataset, train
from .quant import calibrate, calibration_subset, quantize_model
from .decode import detect, write_detections
from .decode.log import COLUMNS
from .metrics import evaluate
from .profile import MCU_THROUGHPUT, plan_memory, bench_latency, profile_table
from .dataio import MANIFEST_FILE, SynthConfig, gen_synthetic, load_manifest, save_manifest, split_manifest
from .dataio import load_dataset, load_image, resize
from .sim import EmphasisParams, OracleDetector, make_corridor, run_episode

# init logger
logger = logging.getLogger(__name__)

# define exit codes
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors as invalid input."""
    
    
    def error(self, message):
        """Prints usage and raises configuration error."""
        
        self.print_usage(sys.stderr)
        raise ConfigError("%s: error: %s" % (self.prog, message))


def main(argv=None):
    """
    Runs command line interface.
    
    Args:
        argv: (str,) or None
            Command line arguments without program name.
    
    Returns:
        int
            Exit code.
    """
    
    handlers = []
    
    try:
        args = make_parser().parse_args(argv)
        handlers = _init_logging(args.log)
        args.func(args)
    
    except OSError as err:
        sys.stderr.write("%s\n" % err)
        return EXIT_IO
    
    except (ValueError, LookupError, ArithmeticError) as err:
        sys.stderr.write("%s\n" % err)
        return EXIT_INVALID
    
    finally:
        _close_logging(handlers)
    
    return EXIT_OK


def make_parser():
    """Creates command line parser with all subcommands."""
    
    parser = ArgumentParser(prog="pyfomo", description="FOMO detector toolkit for microcontroller-class robots.")
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True
    
    common = ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=42, help="random seed (default: 42)")
    common.add_argument('--log', default=None, help="also write log into file")
    
    # gen-data
    cmd = commands.add_parser('gen-data', parents=[common], help="generate synthetic corpus")
    cmd.add_argument('--out', required=True, help="output directory")
    cmd.add_argument('--n', type=int, default=120, help="number of images (default: 120)")
    cmd.add_argument('--size', type=int, default=64, help="image size (default: 64)")
    cmd.add_argument('--contrast', type=float, default=0.9, help="object contrast (default: 0.9)")
    cmd.add_argument('--classes', type=int, default=1, help="number of classes (default: 1)")
    cmd.add_argument('--background', choices=BACKGROUND, default=NOISE, help="background style (default: noise)")
    cmd.add_argument('--split', type=float, default=None, help="also write train/test manifests with given train fraction")
    cmd.set_defaults(func=cmd_gen_data)
    
    # train
    cmd = commands.add_parser('train', parents=[common], help="train FOMO model")
    cmd.add_argument('--data', required=True, help="dataset directory or manifest")
    cmd.add_argument('--out', default="model.lvtx", help="output model (default: model.lvtx)")
    cmd.add_argument('--input-size', type=int, choices=INPUT_SIZES, default=64, help="model input size (default: 64)")
    cmd.add_argument('--preset', choices=('drone', 'shipwreck', 'rocks', 'rover'), default=None, help="dataset hyper-parameters")
    cmd.add_argument('--epochs', type=int, default=None, help="number of epochs (default: 300 or preset)")
    cmd.add_argument('--lr', type=float, default=None, help="learning rate (default: 1e-4 or preset)")
    cmd.add_argument('--batch-size', type=int, default=None, help="batch size (default: 32 or preset)")
    cmd.add_argument('--flip', action='store_true', help="enable horizontal flips")
    cmd.add_argument('--holdout', action='store_true', help="train on the train fraction of data only and score the rest")
    cmd.add_argument('--train-fraction', type=float, default=None, help="train fraction for --holdout (default: 0.8 or preset)")
    cmd.add_argument('--history', default=None, help="write training history as JSON")
    cmd.add_argument('--plot', default=None, help="write training history as SVG")
    cmd.set_defaults(func=cmd_train)
    
    # quantize
    cmd = commands.add_parser('quantize', parents=[common], help="convert model to int8")
    cmd.add_argument('--model', required=True, help="real-valued model")
    cmd.add_argument('--data', required=True, help="calibration dataset directory or manifest")
    cmd.add_argument('--out', default="model-int8.lvtx", help="output model (default: model-int8.lvtx)")
    cmd.add_argument('--calibration', type=int, default=32, help="number of calibration images (default: 32)")
    cmd.set_defaults(func=cmd_quantize)
    
    # eval
    cmd = commands.add_parser('eval', parents=[common], help="evaluate model")
    cmd.add_argument('--model', required=True, help="model to evaluate")
    cmd.add_argument('--data', required=True, help="test dataset directory or manifest")
    cmd.add_argument('--tau', type=float, default=0.5, help="probability threshold (default: 0.5)")
    cmd.add_argument('--tolerance', type=float, default=1.0, help="matching tolerance in cells (default: 1.0)")
    cmd.add_argument('--json', default=None, help="write report as JSON")
    cmd.set_defaults(func=cmd_eval)
    
    # profile
    cmd = commands.add_parser('profile', parents=[common], help="profile memory and latency")
    cmd.add_argument('--model', required=True, nargs='+', help="models to profile")
    cmd.add_argument('--repeats', type=int, default=50, help="number of measured runs (default: 50)")
    cmd.add_argument('--throughput', type=float, default=MCU_THROUGHPUT, help="MCU MACs per second (default: 5e6)")
    cmd.add_argument('--json', default=None, help="write profiles as JSON")
    cmd.set_defaults(func=cmd_profile)
    
    # simulate
    cmd = commands.add_parser('simulate', parents=[common], help="run corridor exploration")
    cmd.add_argument('--model', default=None, help="detector model (default: oracle detector)")
    cmd.add_argument('--length', type=int, default=640, help="corridor length (default: 640)")
    cmd.add_argument('--height', type=int, default=64, help="corridor height (default: 64)")
    cmd.add_argument('--rois', type=int, default=3, help="number of RoIs (default: 3)")
    cmd.add_argument('--contrast', type=float, default=0.9, help="RoI contrast (default: 0.9)")
    cmd.add_argument('--no-ef', dest='ef', action='store_false', help="disable emphasis function")
    cmd.add_argument('--ef-kind', choices=EF_KIND, default=LOOK_CLOSE, help="emphasis function (default: look-close)")
    cmd.add_argument('--tau', type=float, default=0.5, help="emphasis trigger threshold (default: 0.5)")
    cmd.add_argument('--trajectory', default=None, help="write per-frame trajectory as CSV")
    cmd.add_argument('--json', default=None, help="write report as JSON")
    cmd.add_argument('--plot', default=None, help="write trajectory as SVG")
    cmd.set_defaults(func=cmd_simulate)
    
    # detect
    cmd = commands.add_parser('detect', parents=[common], help="detect objects in PPM images")
    cmd.add_argument('--model', required=True, help="detector model")
    cmd.add_argument('images', nargs='+', help="PPM images")
    cmd.add_argument('--tau', type=float, default=0.5, help="probability threshold (default: 0.5)")
    cmd.add_argument('--out', default=None, help="write detections log (default: stdout)")
    cmd.add_argument('--plot', default=None, help="write heatmap of the first image as SVG")
    cmd.set_defaults(func=cmd_detect)
    
    return parser


def cmd_gen_data(args):
    """Generates synthetic corpus."""
    
    config = SynthConfig(
        image_size = args.size,
        image_count = args.n,
        background = args.background,
        contrast = args.contrast,
        num_classes = args.classes,
        seed = args.seed)
    
    manifest = gen_synthetic(config, args.out)
    
    # write split
    if args.split is not None:
        train_part, test_part = split_manifest(manifest, args.split, args.seed)
        save_manifest(train_part, os.path.join(args.out, "train.json"))
        save_manifest(test_part, os.path.join(args.out, "test.json"))


def cmd_train(args):
    """Trains model on dataset."""
    
    # get options
    overrides = {'seed': args.seed, 'flip': args.flip}
    if args.epochs is not None:
        overrides['epochs'] = args.epochs
    if args.lr is not None:
        overrides['learning_rate'] = args.lr
    if args.batch_size is not None:
        overrides['batch_size'] = args.batch_size
    if args.train_fraction is not None:
        overrides['train_fraction'] = args.train_fraction
    
    if args.preset:
        config = TrainConfig.FromPreset(args.preset, **overrides)
    else:
        config = TrainConfig(**overrides)
    
    # load data
    manifest = _load_manifest(args.data)
    dataset = load_dataset(manifest, args.input_size)
    
    test_part = None
    if args.holdout:
        dataset, test_part = split_dataset(dataset, config)
    
    # train
    model = build_fomo(ModelConfig(args.input_size, len(manifest.Classes)), args.seed)
    model, history = train(model, dataset, config)
    save_model(model, args.out)
    
    logger.info("model saved into '%s' (best epoch %s)", args.out, history.BestEpoch)
    
    # score held-out part
    if test_part is not None and len(test_part):
        report = evaluate(model, test_part)
        logger.info("held-out %d images macro F1 %.4f", len(test_part), report.MacroF1)
    
    if args.history:
        _write_json(history.ToJSON(), args.history)
    
    if args.plot:
        from .review import plotting
        plotting.save(plotting.plot_history(history), args.plot)


def cmd_quantize(args):
    """Quantizes model using calibration images."""
    
    model = load_model(args.model)
    manifest = _load_manifest(args.data)
    dataset = load_dataset(manifest, model.Config.InputSize)
    
    indices = calibration_subset(len(dataset), args.calibration, args.seed)
    stats = calibrate(model, dataset.Images[indices])
    
    save_model(quantize_model(model, stats), args.out)


def cmd_eval(args):
    """Evaluates model on dataset."""
    
    model = load_model(args.model)
    manifest = _load_manifest(args.data)
    dataset = load_dataset(manifest, model.Config.InputSize)
    
    report = evaluate(model, dataset, args.tau, args.tolerance)
    sys.stdout.write(report.ToText() + "\n")
    
    if args.json:
        report.Save(args.json)


def cmd_profile(args):
    """Profiles models memory and latency."""
    
    rows = []
    items = []
    
    for path in args.model:
        
        model = load_model(path)
        plan = plan_memory(model)
        latency = bench_latency(model, repeats=args.repeats, throughput=args.throughput)
        
        rows.append((model, plan, latency))
        items.append({'model': path, 'memory': plan.ToJSON(), 'latency': latency.ToJSON()})
    
    sys.stdout.write(profile_table(rows) + "\n")
    
    if args.json:
        _write_json(items, args.json)


def cmd_simulate(args):
    """Runs corridor episode."""
    
    corridor = make_corridor(
        height = args.height,
        length = args.length,
        n_rois = args.rois,
        contrast = args.contrast,
        seed = args.seed)
    
    if args.model:
        detector = load_model(args.model)
    else:
        detector = OracleDetector(corridor)
    
    params = EmphasisParams(tau=args.tau)
    report = run_episode(corridor, detector, args.ef, args.seed, args.ef_kind, params)
    
    sys.stdout.write(report.ToText() + "\n")
    
    if args.json:
        report.Save(args.json)
    
    if args.trajectory:
        report.WriteTrajectory(args.trajectory)
    
    if args.plot:
        from .review import plotting
        plotting.save(plotting.plot_trajectory([report]), args.plot)


def cmd_detect(args):
    """Detects objects in images."""
    
    model = load_model(args.model)
    size = model.Config.InputSize
    
    records = []
    for path in args.images:
        
        image = resize(load_image(path), size)
        for det in detect(model, image, args.tau):
            records.append((os.path.basename(path), det))
    
    if args.out:
        write_detections(args.out, records)
    
    else:
        sys.stdout.write("\t".join(COLUMNS) + "\n")
        for image_id, det in records:
            sys.stdout.write("%s\t%d\t%.4f\t%.2f\t%.2f\t%d\n" % (image_id, det.ClassId, det.Confidence, det.X, det.Y, det.CellCount))
    
    if args.plot:
        from .review import plotting
        image = resize(load_image(args.images[0]), size)
        heatmap = model.Forward(image)
        plotting.save(plotting.plot_heatmap(heatmap, detect(model, image, args.tau), model.Config.CellSize), args.plot)


def _load_manifest(path):
    """Loads manifest from file or dataset directory."""
    
    if os.path.isdir(path):
        path = os.path.join(path, MANIFEST_FILE)
    
    return load_manifest(path)


def _write_json(data, path):
    """Writes JSON document."""
    
    with open(path, 'w', encoding='utf-8') as wf:
        json.dump(data, wf, indent=4, ensure_ascii=False)


def _init_logging(path):
    """Attaches stderr and optional file handlers to package logger."""
    
    root = logging.getLogger('pyfomo')
    root.setLevel(logging.INFO)
    root.propagate = False
    
    handlers = [logging.StreamHandler(sys.stderr)]
    if path:
        handlers.append(logging.FileHandler(path, mode='w', encoding='utf-8'))
    
    for handler in handlers:
        handler.setFormatter(logging.Formatter("%(message)s"))
        root.addHandler(handler)
    
    return handlers


def _close_logging(handlers):
    """Detaches given handlers from package logger."""
    
    root = logging.getLogger('pyfomo')
    
    for handler in handlers:
        root.removeHandler(handler)
        handler.close()
