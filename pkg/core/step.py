from settings import OutputFormat


class Step:
    output_format: OutputFormat

    def __init__(self, output_format: OutputFormat = OutputFormat.TEXT):
        self.output_format = output_format

    def run_step(self, params: dict) -> int:
        """Runs the command and returns its exit status."""
        raise NotImplementedError()

    def emit(self, text: str):
        print(text)

    def emit_lines(self, tagged: dict):
        # machine-readable output: one 'tag: value' line per entry, in insertion order
        for tag, value in tagged.items():
            print(f"{tag}: {value}")
