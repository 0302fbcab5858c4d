import sys

from commandmanager import CommandManager


def main(argv=None):
    return CommandManager.default().run(argv)


if __name__ == "__main__":
    sys.exit(main())
