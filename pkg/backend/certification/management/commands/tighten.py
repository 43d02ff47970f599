"""Management command to search the trial instances for the tightest cases of every bound."""
from certification.management.run_command import RunCommand
from certification.runner import dominance_table, run_tighten


class Command(RunCommand):
    help = "Report the minimum relative gap per suite and compare refined against unrefined bounds"
    mode = "tighten"

    def run(self, config):
        reports = run_tighten(config)
        return reports, dominance_table(reports)
