"""Management command to certify every selected inequality over seeded random instances."""
from certification.management.run_command import RunCommand
from certification.runner import run_certify


class Command(RunCommand):
    help = "Run certification suites and write a report; exits 1 on any violation, 2 on a bad config"
    mode = "certify"

    def run(self, config):
        return run_certify(config), None
