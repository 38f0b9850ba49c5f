/** Read plotted values back out of a rendered SVG via the data- attributes. */

export interface Mark {
  panel: string;
  series: string;
  x: number;
  mean: number;
  std: number;
  n: number;
}

export function extractMarks(svg: string): Mark[] {
  const tags = svg.match(/<(?:circle|rect)\s[^>]*class="mark"[^>]*\/>/g) ?? [];
  return tags.map((tag) => {
    const attr = (name: string): string => {
      const found = tag.match(new RegExp(`${name}="([^"]*)"`));
      if (!found) {
        throw new Error(`mark is missing ${name}: ${tag}`);
      }
      return found[1];
    };
    return {
      panel: attr("data-panel"),
      series: attr("data-series"),
      x: Number(attr("data-x")),
      mean: Number(attr("data-mean")),
      std: Number(attr("data-std")),
      n: Number(attr("data-n")),
    };
  });
}
