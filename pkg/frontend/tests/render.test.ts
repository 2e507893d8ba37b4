import { describe, expect, it } from 'vitest';

import { escapeHtml, vocabRowHtml } from '../src/app.js';

describe('vocabRowHtml', () => {
    it('lights exactly the server-reported number of segments', () => {
        const html = vocabRowHtml({
            surface: '寿司',
            reading: 'すし',
            meaning: 'sushi',
            progress: 3,
            exposure_count: 7,
            display: '寿司: sushi (Progress: 3/5)',
        });
        expect(html.match(/class="seg on"/g)).toHaveLength(3);
        expect(html.match(/class="seg "/g)).toHaveLength(2);
        expect(html).toContain('3/5');
        expect(html).toContain('title="寿司: sushi (Progress: 3/5)"');
    });
});

describe('escapeHtml', () => {
    it('neutralizes markup in server strings', () => {
        expect(escapeHtml('<b>&"x"')).toBe('&lt;b&gt;&amp;&quot;x&quot;');
    });
});
