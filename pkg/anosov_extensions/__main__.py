from .experiment.cli import main

main()
