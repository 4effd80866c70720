from dataclasses import replace

from ...experiments import dump_channels, run_experiment, sweep_csv,\
                              write_archive, write_text
from ..base import RisCommand, int_at_least, seed


class Command(RisCommand):
    help = "Run a Monte Carlo SE/EE sweep of a rotatable BC-RIS against " +\
           "the EC-RIS and write one CSV row per axis point."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--seed", type=seed,
                            help="Overrides sweep.seed.")
        parser.add_argument("--trials", type=int_at_least(2),
                            help="Overrides sweep.n_trials.")
        parser.add_argument("--format", choices=["csv"], default="csv")
        parser.add_argument("--archive",
                            help="Also write a .zdc run archive.")
        parser.add_argument("--jobs", type=int_at_least(1),
                            help="Parallel workers, RIS_N_JOBS if omitted.")
        parser.add_argument("--dump-channels", metavar="PATH",
                            help="Also write the BC-RIS channel draw of "
                                 "trial 0 at the first axis point as JSON.")

    def run(self, **options):
        config = self.load_config(options)
        sweep = config.sweep
        if options["seed"] is not None:
            sweep = replace(sweep, seed=options["seed"])
        if options["trials"] is not None:
            sweep = replace(sweep, n_trials=options["trials"])
        config = replace(config, sweep=sweep,
                         output_path=options["output"] or config.output_path,
                         archive_path=options["archive"] or
                         config.archive_path)
        self.log_config(config)

        if options["dump_channels"]:
            write_text(dump_channels(config), options["dump_channels"])

        result = run_experiment(config, options["jobs"])
        self.emit(sweep_csv(result), config.output_path)
        if config.archive_path:
            write_archive(config, result, config.archive_path)
