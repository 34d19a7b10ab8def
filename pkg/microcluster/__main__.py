from microcluster.cli.main import run

run()
