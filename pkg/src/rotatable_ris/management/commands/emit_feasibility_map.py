from dataclasses import replace

from ...experiments import emit_feasibility_map
from ..base import RisCommand


class Command(RisCommand):
    help = "Write the EE feasibility verdict of the BC-RIS over a " +\
           "(P2, P_unit) grid as CSV."
    kind = "feasibility"

    def run(self, **options):
        config = self.load_config(options)
        config = replace(config,
                         output_path=options["output"] or config.output_path)
        self.log_config(config)
        self.emit(emit_feasibility_map(config), config.output_path)
